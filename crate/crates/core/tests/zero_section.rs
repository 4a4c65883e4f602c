use chowkit::chow_ring::abc_triples;
use chowkit::exact_arith::frac;
use chowkit::zero_section::{
    alpha, alpha_b0_closed_form, assemble_main_rhs, boundary_zero_section, eta, invariant_sum, maple_constant,
    maple_inner_sum, verify_eta_alpha, verify_main, verify_solver, verify_triangular, CoefficientTable,
};
use chowkit::{InvariantBasis, RingContext};

#[test]
fn main_identity_low_genus() {
    for g in 1..=5 {
        let r = verify_main(g).unwrap();
        assert!(r.holds, "g={g} residual {}", r.residual.format(chowkit::FormatMode::Text));
        assert!(r.residual.is_zero());
    }
}

#[test]
fn bases_agree_in_the_free_ring() {
    for g in 1..=7 {
        assert!(verify_eta_alpha(g).unwrap().holds, "g={g}");
    }
}

#[test]
fn genus_two_tables() {
    let t = CoefficientTable::for_genus(2);
    let alphas: Vec<_> = abc_triples(2).into_iter().map(|k| t.alpha(k).unwrap().clone()).collect();
    assert_eq!(alphas, vec![frac(1, 2), frac(1, 8), frac(7, 1920), frac(1, 24)]);
    let etas: Vec<_> = abc_triples(2).into_iter().map(|k| t.eta(k).unwrap().clone()).collect();
    assert_eq!(etas, vec![frac(1, 2), frac(-1, 12), frac(-1, 240), frac(1, 24)]);
}

#[test]
fn table_matches_pointwise_formulas() {
    for g in 1..=6usize {
        let t = CoefficientTable::for_genus(g);
        for (a, b, c) in abc_triples(g) {
            let (a64, b64, c64) = (a as i64, b as i64, c as i64);
            assert_eq!(t.alpha((a, b, c)).unwrap(), &alpha(a64, b64, c64).unwrap());
            assert_eq!(t.eta((a, b, c)).unwrap(), &eta(a64, b64, c64).unwrap());
        }
    }
}

#[test]
fn closed_form_at_b_zero() {
    for a in 0..=14i64 {
        for c in 0..=(14 - a) / 2 {
            assert_eq!(alpha(a, 0, c).unwrap(), alpha_b0_closed_form(a, c).unwrap(), "a={a} c={c}");
        }
    }
}

#[test]
fn triangular_sums_vanish() {
    for g in 1..=5 {
        assert!(verify_triangular(g).unwrap().holds, "g={g}");
    }
}

#[test]
fn solver_contains_the_closed_form() {
    for g in 1..=4 {
        let r = verify_solver(g).unwrap();
        assert!(r.holds);
        assert!(r.kernel_dimension.is_some());
    }
}

#[test]
fn expansion_lives_in_the_right_degree() {
    let ctx = RingContext::new(3).unwrap();
    let rhs = assemble_main_rhs(&ctx, InvariantBasis::Eta);
    let diff = &rhs - &boundary_zero_section(&ctx);
    assert!(ctx.is_zero(&diff).unwrap());
    assert_eq!(invariant_sum(3, InvariantBasis::Eta).degree(), Some(3));
    assert!(rhs.is_homogeneous());
    assert_eq!(rhs.degree(), Some(3));
}

#[test]
fn inner_sum_is_proportional() {
    for g in 0..=10usize {
        for h in 0..=g / 2 {
            assert!(maple_constant(g, h).unwrap().is_some(), "g={g} h={h}");
        }
    }
    assert!(maple_inner_sum(4, 3, 0).is_err());
    assert!(maple_inner_sum(4, 1, 2).is_err());
}
