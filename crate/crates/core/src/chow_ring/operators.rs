//! Linear substitutions acting on `(xi, T1, P, T2)`: the shift and its square
//! root, the involution swapping the two sections, the two section
//! restrictions, and the invariant generators.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exact_arith::{frac, rat};
use crate::poly::{Polynomial, VarSet};

use super::XI;

fn canon(s: &str) -> Polynomial {
    Polynomial::parse(&VarSet::canonical(), s).expect("static expression")
}

fn require_xi_free(p: &Polynomial) -> Result<()> {
    if p.vars() == &VarSet::canonical() && p.degree_in(XI) > 0 {
        return Err(Error::XiPresent);
    }
    Ok(())
}

/// `(s^*)^n`: `T1 -> T1 + nP + n^2 T2`, `P -> P + 2n T2`, `T2 -> T2`.
pub fn shift(p: &Polynomial, n: i64) -> Result<Polynomial> {
    require_xi_free(p)?;
    let vars = p.vars();
    let t1 = Polynomial::var(vars, "T1")?;
    let pp = Polynomial::var(vars, "P")?;
    let t2 = Polynomial::var(vars, "T2")?;
    let t1_img = &(&t1 + &pp.scale(&rat(n))) + &t2.scale(&rat(n * n));
    let p_img = &pp + &t2.scale(&rat(2 * n));
    p.substitute_pairs(&[("T1", t1_img), ("P", p_img)])
}

/// Square root of the shift: `T1 -> T1 + P/2 + T2/4`, `P -> P + T2`.
pub fn half_shift(p: &Polynomial) -> Result<Polynomial> {
    require_xi_free(p)?;
    let vars = p.vars();
    let t1 = Polynomial::var(vars, "T1")?;
    let pp = Polynomial::var(vars, "P")?;
    let t2 = Polynomial::var(vars, "T2")?;
    let t1_img = &(&t1 + &pp.scale(&frac(1, 2))) + &t2.scale(&frac(1, 4));
    let p_img = &pp + &t2;
    p.substitute_pairs(&[("T1", t1_img), ("P", p_img)])
}

/// `j`: `xi -> xi - P`, `P -> -P`, `T_i -> T_i`.
pub fn involution_j(p: &Polynomial) -> Polynomial {
    p.substitute_pairs(&[("xi", canon("xi - P")), ("P", canon("-P"))]).expect("canonical variable set")
}

/// Restriction to the zero section: `xi -> P`.
pub fn restrict_zero(p: &Polynomial) -> Polynomial {
    p.substitute_pairs(&[("xi", canon("P"))]).expect("canonical variable set")
}

/// Restriction to the infinity section: `xi -> 0`.
pub fn restrict_infty(p: &Polynomial) -> Polynomial {
    p.substitute_pairs(&[("xi", canon("0"))]).expect("canonical variable set")
}

/// The generators `Theta`, `D`, `Delta` of the invariant subring, written in
/// `(xi, T1, P, T2)`.
#[derive(Debug, Clone)]
pub struct InvariantGenerators {
    pub theta: Polynomial,
    pub d: Polynomial,
    pub delta: Polynomial,
}

impl InvariantGenerators {
    /// `Q = Delta - 2 Theta D`, which expands to `4 T1 T2 - P^2`.
    pub fn q(&self) -> Polynomial {
        &self.delta - &(&self.theta * &self.d).scale(&rat(2))
    }

    /// Substitution map sending the free variables `(Theta, D, Delta)` to
    /// these generators.
    pub fn as_substitution(&self) -> Vec<(&'static str, Polynomial)> {
        vec![("Theta", self.theta.clone()), ("D", self.d.clone()), ("Delta", self.delta.clone())]
    }
}

pub fn invariant_generators() -> InvariantGenerators {
    static GENS: OnceLock<InvariantGenerators> = OnceLock::new();
    GENS.get_or_init(|| InvariantGenerators {
        theta: canon("xi + T1 - 1/2*P"),
        d: canon("-2*T2"),
        delta: canon("-4*xi*T2 - P^2 + 2*P*T2"),
    })
    .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow_ring::RingContext;
    use crate::poly::tests::arb_poly;
    use proptest::prelude::*;

    #[test]
    fn shift_examples() {
        for n in -10..=10 {
            let expected = &(&canon("T1") + &canon("P").scale(&rat(n))) + &canon("T2").scale(&rat(n * n));
            assert_eq!(shift(&canon("T1"), n).unwrap(), expected);
        }
        let p = canon("T1^2 - 3*P*T2 + 1/5");
        assert_eq!(shift(&p, 0).unwrap(), p);
        assert_eq!(shift(&canon("xi"), 1), Err(Error::XiPresent));
        assert_eq!(half_shift(&canon("xi*T1")), Err(Error::XiPresent));
    }

    #[test]
    fn involution_and_restrictions() {
        let p = canon("xi*T1^2 - P^3 + xi*P*T2");
        assert_eq!(involution_j(&involution_j(&p)), p);
        assert_eq!(restrict_zero(&canon("xi*T1")), canon("P*T1"));
        assert_eq!(restrict_infty(&canon("xi*T1 + T2")), canon("T2"));
        // xi - P/2 is fixed by j
        let mu = canon("xi - 1/2*P");
        assert_eq!(involution_j(&mu), mu);
        assert_eq!(involution_j(&canon("P")), canon("-P"));
    }

    #[test]
    fn generators() {
        let g = invariant_generators();
        assert_eq!(g.delta, canon("-4*xi*T2 - P^2 + 2*P*T2"));
        assert_eq!(g.q(), canon("4*T1*T2 - P^2"));
        let factored = &canon("2*xi - P") * &canon("-2*xi + P - 2*T2");
        for genus in 1..=4 {
            let ctx = RingContext::new(genus).unwrap();
            assert!(ctx.is_zero(&(&factored - &g.delta)).unwrap());
        }
    }

    #[test]
    fn invariance_predicates() {
        let gens = invariant_generators();
        for g in 1..=4 {
            let ctx = RingContext::new(g).unwrap();
            for p in [&gens.theta, &gens.d, &gens.delta] {
                assert!(ctx.is_shift_invariant(p).unwrap());
                assert!(ctx.is_j_invariant(p).unwrap());
            }
            let z = &canon("xi") * &canon("T1").pow(g as u32 - 1);
            assert!(ctx.is_shift_invariant(&z).unwrap());
        }
        for g in 2..=4 {
            let ctx = RingContext::new(g).unwrap();
            assert!(!ctx.is_j_invariant(&canon("P")).unwrap());
            // xi alone is not shift-invariant: its restrictions are P and 0.
            assert!(!ctx.is_shift_invariant(&canon("xi")).unwrap());
        }
    }

    fn xi_free(vars: VarSet) -> impl Strategy<Value = Polynomial> {
        arb_poly(vars).prop_map(|p| p.filter(|m| m.exp(XI) == 0))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn half_shift_squares_to_shift(p in xi_free(VarSet::canonical())) {
            let twice = half_shift(&half_shift(&p).unwrap()).unwrap();
            prop_assert_eq!(twice, shift(&p, 1).unwrap());
        }

        #[test]
        fn shifts_compose(p in xi_free(VarSet::canonical()), m in -4i64..=4, n in -4i64..=4) {
            let lhs = shift(&shift(&p, n).unwrap(), m).unwrap();
            prop_assert_eq!(lhs, shift(&p, m + n).unwrap());
        }
    }
}
