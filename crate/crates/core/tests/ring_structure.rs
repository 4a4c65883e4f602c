use chowkit::chow_ring::{involution_j, shift};
use chowkit::exact_arith::{fact_q, frac, rat};
use chowkit::{Polynomial, RingContext, VarSet};
use num_traits::Zero;
use proptest::prelude::*;

fn parse(s: &str) -> Polynomial {
    Polynomial::parse(&VarSet::canonical(), s).unwrap()
}

#[test]
fn hilbert_function_shape() {
    for g in 1..=5 {
        let ctx = RingContext::new(g).unwrap();
        let dims: Vec<usize> = (0..=2 * g).map(|k| ctx.dim_graded(k, None)).collect();
        for (k, &d) in dims.iter().enumerate().take(g) {
            assert_eq!(d, (k + 1) * (k + 2) / 2, "g={g} k={k}");
        }
        assert_eq!(dims[2 * g - 2], 1);
        assert_eq!(dims[2 * g - 1], 0);
        assert_eq!(dims[2 * g], 0);
        for k in 0..g {
            assert_eq!(dims[g - 1 - k], dims[g - 1 + k], "g={g} k={k}");
        }
        // the d-graded pieces add up
        for (k, &dim) in dims.iter().enumerate() {
            let by_grade: usize = (-(k as i64)..=k as i64).map(|l| ctx.dim_graded(k, Some(l))).sum();
            assert_eq!(by_grade, dim);
        }
    }
}

#[test]
fn pushforward_of_even_p_powers() {
    for g in 1..=5usize {
        let ctx = RingContext::new(g).unwrap();
        for a in 0..g {
            let e = g - 1 - a;
            let p = parse(&format!("T1^{e}*P^{}*T2^{e}", 2 * a));
            let sign = if a % 2 == 0 { rat(1) } else { rat(-1) };
            let expected = sign * fact_q(g - 1) * fact_q(2 * a) * fact_q(g - 1 - a) / fact_q(a);
            assert_eq!(ctx.socle_pushforward(&p).unwrap(), expected, "g={g} a={a}");
        }
    }
}

#[test]
fn odd_d_grade_pushes_forward_to_zero() {
    let ctx = RingContext::new(3).unwrap();
    assert!(ctx.socle_pushforward(&parse("T1^3*P")).unwrap().is_zero());
    assert_eq!(ctx.socle_pushforward(&parse("T1^2*T2^2")).unwrap(), rat(4));
}

#[test]
fn pairings_are_perfect() {
    for g in 1..=4 {
        let ctx = RingContext::new(g).unwrap();
        for k in 0..g {
            let p = ctx.pairing_matrix(k).unwrap();
            assert_eq!(p.row_basis.len(), p.col_basis.len());
            assert!(!p.determinant().is_zero(), "g={g} k={k}");
        }
    }
}

#[test]
fn relations_reduce_to_zero() {
    for g in 1..=5 {
        let ctx = RingContext::new(g).unwrap();
        for r in ctx.relations() {
            assert!(ctx.is_zero(r).unwrap());
        }
        let xi_rel = parse("xi^2 - xi*P");
        assert!(ctx.is_zero(&xi_rel).unwrap());
    }
}

#[test]
fn shift_preserves_the_ideal() {
    let ctx = RingContext::new(4).unwrap();
    for r in ctx.relations() {
        for n in [-2, 1, 3] {
            assert!(ctx.is_zero(&shift(r, n).unwrap()).unwrap());
        }
    }
    let xi_rel = parse("xi^2 - xi*P");
    assert!(ctx.is_zero(&involution_j(&xi_rel)).unwrap());
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    let names = ["xi", "T1", "P", "T2"];
    prop::collection::vec((-4i64..=4, 1i64..=3, prop::collection::vec(0u32..=3, 4)), 0..6).prop_map(move |terms| {
        let vars = VarSet::canonical();
        let mut p = Polynomial::zero(&vars);
        for (num, den, exps) in terms {
            let mut t = Polynomial::constant(&vars, frac(num, den));
            for (name, e) in names.iter().zip(exps) {
                t = &t * &Polynomial::var(&vars, name).unwrap().pow(e);
            }
            p = &p + &t;
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_is_idempotent_and_linear(a in small_poly(), b in small_poly(), g in 1usize..=4) {
        let ctx = RingContext::new(g).unwrap();
        let na = ctx.normal_form(&a).unwrap();
        prop_assert_eq!(ctx.normal_form(&na).unwrap(), na.clone());
        let nb = ctx.normal_form(&b).unwrap();
        prop_assert_eq!(ctx.normal_form(&(&a + &b)).unwrap(), &na + &nb);
        prop_assert_eq!(ctx.normal_form(&(&a * &b)).unwrap(), ctx.normal_form(&(&na * &nb)).unwrap());
    }
}

#[test]
fn extra_gluing_class() {
    let x = parse("xi*(6*P*T2 + 12*T2^2) + P^3 - 4*P*T2^2");
    // j(X) - X = -2 (6 mu P T2 + 2 P T2^2 + P^3) with mu = xi - P/2
    let defect = parse("-2*(6*(xi - 1/2*P)*P*T2 + 2*P*T2^2 + P^3)");
    assert_eq!(&involution_j(&x) - &x, defect);
    for g in 1..=5 {
        let ctx = RingContext::new(g).unwrap();
        assert!(ctx.is_shift_invariant(&x).unwrap());
        assert_eq!(ctx.is_j_invariant(&x).unwrap(), g <= 2, "g={g}");
    }
}
