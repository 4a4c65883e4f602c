//! Coefficients of the zero-section class and machine checks of the identity
//!
//! ```text
//! xi T1^{g-1} / (g-1)! = sum_{a+b+2c=g} alpha_{a,b,c} (Theta - D/8)^a D^b (Delta - 2 Theta D)^c
//!                      = sum_{a+b+2c=g} eta_{a,b,c}   Theta^a D^b Delta^c
//! ```
//!
//! in the genus-`g` ring, together with the intermediate statements used to
//! derive the coefficients.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::chow_ring::{abc_triples, invariant_generators, InvariantBasis, RingContext};
use crate::error::{Error, Result};
use crate::exact_arith::{bernoulli, dfact_q, fact_q, fmt_rational, frac, pow2, rat, sign, Rational};
use crate::poly::{FormatMode, Polynomial, VarSet};

fn check_non_negative(vals: &[i64]) -> Result<()> {
    if vals.iter().any(|&v| v < 0) {
        return Err(Error::InvalidArgument(format!("indices must be non-negative, got {vals:?}")));
    }
    Ok(())
}

/// `alpha_{a,b,c}`.
pub fn alpha(a: i64, b: i64, c: i64) -> Result<Rational> {
    check_non_negative(&[a, b, c])?;
    let m = b + c;
    let num =
        sign(m + 1) * (pow2(-m) - pow2(1 - 3 * m)) * dfact_q(2 * a + 2 * b + 2 * c - 1) * bernoulli(2 * m as usize);
    let den = dfact_q(2 * a + 2 * c - 1)
        * dfact_q(2 * b + 2 * c - 1)
        * fact_q(a as usize)
        * fact_q(b as usize)
        * fact_q(c as usize);
    Ok(num / den)
}

/// `alpha_{a,0,c} = (-1)^c (2^{1-2c} - 1) B_{2c} / (a! (2c)!)`.
pub fn alpha_b0_closed_form(a: i64, c: i64) -> Result<Rational> {
    check_non_negative(&[a, c])?;
    Ok(sign(c) * (pow2(1 - 2 * c) - rat(1)) * bernoulli(2 * c as usize) / (fact_q(a as usize) * fact_q(2 * c as usize)))
}

/// `eta_{a,b,c}`, the coefficients in the plain `Theta^a D^b Delta^c` basis.
pub fn eta(a: i64, b: i64, c: i64) -> Result<Rational> {
    check_non_negative(&[a, b, c])?;
    let prefactor =
        sign(b + c) * dfact_q(2 * c + 2 * b - 1) / (pow2(3 * b + 3 * c) * fact_q(a as usize) * fact_q(c as usize));
    let mut sum = Rational::zero();
    for x in 0..=b {
        let num = (rat(2) - pow2(2 * c + 2 * x)) * bernoulli((2 * c + 2 * x) as usize);
        let den = dfact_q(2 * c + 2 * b - 2 * x - 1)
            * dfact_q(2 * c + 2 * x - 1)
            * fact_q((b - x) as usize)
            * fact_q(x as usize);
        sum += num / den;
    }
    Ok(prefactor * sum)
}

/// Both coefficient families for one genus, keyed by `(a, b, c)` with
/// `a + b + 2c = g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    pub genus: usize,
    pub entries: BTreeMap<(u32, u32, u32), (Rational, Rational)>,
}

impl CoefficientTable {
    /// Builds (or fetches from the process-wide cache) the table for `g`.
    pub fn for_genus(g: usize) -> Arc<CoefficientTable> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CoefficientTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().expect("coefficient cache poisoned").get(&g) {
            return t.clone();
        }
        let entries = abc_triples(g)
            .into_iter()
            .map(|(a, b, c)| {
                let (a_, b_, c_) = (a as i64, b as i64, c as i64);
                ((a, b, c), (alpha(a_, b_, c_).unwrap(), eta(a_, b_, c_).unwrap()))
            })
            .collect();
        let table = Arc::new(CoefficientTable { genus: g, entries });
        cache.lock().expect("coefficient cache poisoned").entry(g).or_insert(table).clone()
    }

    pub fn alpha(&self, key: (u32, u32, u32)) -> Option<&Rational> {
        self.entries.get(&key).map(|(a, _)| a)
    }

    pub fn eta(&self, key: (u32, u32, u32)) -> Option<&Rational> {
        self.entries.get(&key).map(|(_, e)| e)
    }

    pub fn coefficients(&self, basis: InvariantBasis) -> BTreeMap<(u32, u32, u32), Rational> {
        self.entries
            .iter()
            .map(|(&k, (a, e))| (k, if basis == InvariantBasis::Alpha { a.clone() } else { e.clone() }))
            .collect()
    }
}

/// Outcome of one identity check.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub identity: String,
    pub genus: usize,
    pub holds: bool,
    /// Normal form of `lhs - rhs`; zero iff the identity holds.
    pub residual: Polynomial,
    pub kernel_dimension: Option<usize>,
    pub elapsed: Duration,
}

impl VerificationReport {
    fn new(identity: &str, genus: usize, residual: Polynomial, start: Instant) -> Self {
        VerificationReport {
            identity: identity.to_string(),
            genus,
            holds: residual.is_zero(),
            residual,
            kernel_dimension: None,
            elapsed: start.elapsed(),
        }
    }

    /// JSON form. Timing is only included when `with_timing` is set, so the
    /// default output is reproducible byte for byte.
    pub fn to_json(&self, with_timing: bool) -> Value {
        let mut v = json!({
            "identity": self.identity,
            "genus": self.genus,
            "holds": self.holds,
            "residual": self.residual.format(FormatMode::Text),
        });
        if let Some(k) = self.kernel_dimension {
            v["kernel_dimension"] = json!(k);
        }
        if with_timing {
            v["elapsed_ms"] = json!(self.elapsed.as_secs_f64() * 1e3);
        }
        v
    }
}

/// `xi T1^{g-1} / (g-1)!`.
pub fn boundary_zero_section(ctx: &RingContext) -> Polynomial {
    let g = ctx.genus();
    let t1 = Polynomial::var(ctx.vars(), "T1").expect("canonical set");
    let xi = Polynomial::var(ctx.vars(), "xi").expect("canonical set");
    (&xi * &t1.pow(g as u32 - 1)).scale(&fact_q(g - 1).recip())
}

/// The right-hand side as a polynomial in the free variables
/// `(Theta, D, Delta)`, before substituting the generators.
pub fn invariant_sum(g: usize, basis: InvariantBasis) -> Polynomial {
    let vars = VarSet::invariant();
    let theta = Polynomial::var(&vars, "Theta").unwrap();
    let d = Polynomial::var(&vars, "D").unwrap();
    let delta = Polynomial::var(&vars, "Delta").unwrap();
    let (first, third) = match basis {
        InvariantBasis::Alpha => (&theta - &d.scale(&frac(1, 8)), &delta - &(&theta * &d).scale(&rat(2))),
        InvariantBasis::Eta => (theta, delta),
    };
    let table = CoefficientTable::for_genus(g);
    let mut out = Polynomial::zero(&vars);
    for ((a, b, c), coeff) in table.coefficients(basis) {
        let term = &(&first.pow(a) * &d.pow(b)) * &third.pow(c);
        out = &out + &term.scale(&coeff);
    }
    out
}

/// Substitutes `Theta, D, Delta` by their expressions in `(xi, T1, P, T2)`.
pub fn substitute_generators(p: &Polynomial) -> Result<Polynomial> {
    p.substitute_pairs(&invariant_generators().as_substitution())
}

/// The right-hand side expanded in `(xi, T1, P, T2)`, not reduced.
pub fn assemble_main_rhs(ctx: &RingContext, basis: InvariantBasis) -> Polynomial {
    substitute_generators(&invariant_sum(ctx.genus(), basis)).expect("invariant variable set")
}

/// Checks the main identity in the genus-`g` ring.
pub fn verify_main(g: usize) -> Result<VerificationReport> {
    let ctx = RingContext::new(g)?;
    verify_main_in(&ctx)
}

pub fn verify_main_in(ctx: &RingContext) -> Result<VerificationReport> {
    let start = Instant::now();
    let diff = &assemble_main_rhs(ctx, InvariantBasis::Alpha) - &boundary_zero_section(ctx);
    let residual = ctx.normal_form(&diff)?;
    Ok(VerificationReport::new("main", ctx.genus(), residual, start))
}

/// Checks that the alpha and eta forms agree in the free ring
/// `Q[Theta, D, Delta]` (no relations involved).
pub fn verify_eta_alpha(g: usize) -> Result<VerificationReport> {
    if g == 0 {
        return Err(Error::InvalidArgument("genus must be at least 1".into()));
    }
    let start = Instant::now();
    let residual = &invariant_sum(g, InvariantBasis::Alpha) - &invariant_sum(g, InvariantBasis::Eta);
    Ok(VerificationReport::new("eta_alpha", g, residual, start))
}

/// `sum alpha_{a,b,c} T1^a (-2 T2)^b (4 T1 T2 - P^2)^c` in `R`.
pub fn triangular_sum(g: usize) -> Polynomial {
    let vars = VarSet::canonical();
    let t1 = Polynomial::var(&vars, "T1").unwrap();
    let minus_2t2 = Polynomial::parse(&vars, "-2*T2").unwrap();
    let q = Polynomial::parse(&vars, "4*T1*T2 - P^2").unwrap();
    let table = CoefficientTable::for_genus(g);
    let mut out = Polynomial::zero(&vars);
    for ((a, b, c), coeff) in table.coefficients(InvariantBasis::Alpha) {
        let term = &(&t1.pow(a) * &minus_2t2.pow(b)) * &q.pow(c);
        out = &out + &term.scale(&coeff);
    }
    out
}

/// Checks that the triangular sum vanishes in the genus-`g` ring.
pub fn verify_triangular(g: usize) -> Result<VerificationReport> {
    verify_triangular_in(&RingContext::new(g)?)
}

pub fn verify_triangular_in(ctx: &RingContext) -> Result<VerificationReport> {
    let start = Instant::now();
    let residual = ctx.normal_form(&triangular_sum(ctx.genus()))?;
    Ok(VerificationReport::new("triangular", ctx.genus(), residual, start))
}

/// Checks shift- and j-invariance of `Theta`, `D`, `Delta`, `Q` and of the
/// boundary zero-section class. The residual is the first nonvanishing
/// defect, if any.
pub fn verify_invariance(g: usize) -> Result<VerificationReport> {
    verify_invariance_in(&RingContext::new(g)?)
}

pub fn verify_invariance_in(ctx: &RingContext) -> Result<VerificationReport> {
    let g = ctx.genus();
    let start = Instant::now();
    let gens = invariant_generators();
    let z = boundary_zero_section(ctx);
    let mut residual = Polynomial::zero(ctx.vars());
    for p in [&gens.theta, &gens.d, &gens.delta, &gens.q(), &z] {
        let shift_defect =
            &crate::chow_ring::shift(&crate::chow_ring::restrict_infty(p), 1)? - &crate::chow_ring::restrict_zero(p);
        let j_defect = &crate::chow_ring::involution_j(p) - p;
        for defect in [shift_defect, j_defect] {
            let nf = ctx.normal_form(&defect)?;
            if residual.is_zero() && !nf.is_zero() {
                residual = nf;
            }
        }
    }
    Ok(VerificationReport::new("invariance", g, residual, start))
}

/// Solves for the boundary class in the alpha basis and checks that the
/// closed-form table lies in the solution set.
pub fn verify_solver(g: usize) -> Result<VerificationReport> {
    verify_solver_in(&RingContext::new(g)?)
}

pub fn verify_solver_in(ctx: &RingContext) -> Result<VerificationReport> {
    let g = ctx.genus();
    let start = Instant::now();
    let target = boundary_zero_section(ctx);
    let solution = ctx.express_in_invariants(&target, InvariantBasis::Alpha, g)?;
    let residual = ctx.normal_form(&(&assemble_main_rhs(ctx, InvariantBasis::Alpha) - &target))?;
    let mut report = VerificationReport::new("solver", g, residual, start);
    report.kernel_dimension = Some(solution.kernel_dimension);
    Ok(report)
}

/// `sum_{c=l}^{h} (-1)^c 4^c (2g-2c)! / ((g-c)! (c-l)! (g-h-c)! (h-c)!)`
/// for `0 <= l <= h`, `2h <= g`.
pub fn maple_inner_sum(g: usize, h: usize, l: usize) -> Result<Rational> {
    if l > h || 2 * h > g {
        return Err(Error::OutOfRange(format!("need 0 <= l <= h and g - h >= h, got g={g} h={h} l={l}")));
    }
    let mut sum = Rational::zero();
    for c in l..=h {
        let num = sign(c as i64) * pow2(2 * c as i64) * fact_q(2 * g - 2 * c);
        let den = fact_q(g - c) * fact_q(c - l) * fact_q(g - h - c) * fact_q(h - c);
        sum += num / den;
    }
    Ok(sum)
}

/// `maple_inner_sum(g, h, l)` divided by
/// `(-1)^l 4^l l! / ((g-l-h)! (h-l)! (2l)!)`; independent of `l` when the
/// closed form holds.
pub fn maple_ratio(g: usize, h: usize, l: usize) -> Result<Rational> {
    let lhs = maple_inner_sum(g, h, l)?;
    let shape = sign(l as i64) * pow2(2 * l as i64) * fact_q(l) / (fact_q(g - l - h) * fact_q(h - l) * fact_q(2 * l));
    Ok(lhs / shape)
}

/// The common ratio `C_{g,h}` if it is the same for every `0 <= l <= h`.
pub fn maple_constant(g: usize, h: usize) -> Result<Option<Rational>> {
    let first = maple_ratio(g, h, 0)?;
    for l in 1..=h {
        if maple_ratio(g, h, l)? != first {
            return Ok(None);
        }
    }
    Ok(Some(first))
}

/// Every alpha value for genus `g` is strictly positive.
pub fn alphas_positive(g: usize) -> bool {
    CoefficientTable::for_genus(g).entries.values().all(|(a, _)| a.is_positive())
}

/// Text row for a coefficient entry, `(a,b,c): value`.
pub fn format_entry(key: (u32, u32, u32), value: &Rational) -> String {
    format!("({},{},{}): {}", key.0, key.1, key.2, fmt_rational(value))
}

/// Coefficient of `Theta^a D^b Delta^c` in a polynomial over the free
/// invariant variables.
pub fn invariant_coeff(p: &Polynomial, (a, b, c): (u32, u32, u32)) -> Rational {
    p.coeff(&crate::poly::Monomial::new(vec![a, b, c]))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: expand the alpha form in the free ring by direct
    // multinomial bookkeeping over (Theta, D, Delta) coefficients, without
    // going through `invariant_sum`.
    fn eta_oracle(g: usize) -> BTreeMap<(u32, u32, u32), Rational> {
        // (Theta - D/8)^a  = sum_i C(a,i) Theta^{a-i} (-1/8)^i D^i
        // (Delta - 2ThetaD)^c = sum_j C(c,j) Delta^{c-j} (-2)^j Theta^j D^j
        let binom = |n: u32, k: u32| fact_q(n as usize) / (fact_q(k as usize) * fact_q((n - k) as usize));
        let mut out: BTreeMap<(u32, u32, u32), Rational> = BTreeMap::new();
        for (a, b, c) in abc_triples(g) {
            let al = alpha(a as i64, b as i64, c as i64).unwrap();
            for i in 0..=a {
                for j in 0..=c {
                    let coeff = &al * binom(a, i) * binom(c, j) * frac(-1, 8).pow(i as i32) * rat(-2).pow(j as i32);
                    let key = (a - i + j, i + b + j, c - j);
                    *out.entry(key).or_insert_with(Rational::zero) += coeff;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    #[test]
    fn alpha_examples() {
        for g in 1..=8 {
            assert_eq!(alpha(g, 0, 0).unwrap(), fact_q(g as usize).recip());
        }
        assert_eq!(alpha(2, 0, 0).unwrap(), frac(1, 2));
        assert_eq!(alpha(0, 0, 1).unwrap(), frac(1, 24));
        assert_eq!(alpha(1, 1, 0).unwrap(), frac(1, 8));
        assert_eq!(alpha(0, 1, 0).unwrap(), frac(1, 24));
        assert!(alpha(-1, 0, 0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(alpha_b0_closed_form(0, 1).unwrap(), frac(1, 24));
        for g in 0..=8 {
            assert_eq!(alpha_b0_closed_form(g, 0).unwrap(), fact_q(g as usize).recip());
        }
        for a in 0..=20 {
            for c in 0..=(20 - a) / 2 {
                assert_eq!(alpha(a, 0, c).unwrap(), alpha_b0_closed_form(a, c).unwrap(), "a={a} c={c}");
            }
        }
        assert!(alpha_b0_closed_form(0, -1).is_err());
    }

    #[test]
    fn eta_matches_oracle_fixtures() {
        // frozen from eta_oracle(2)
        let fixtures =
            [((2, 0, 0), frac(1, 2)), ((1, 1, 0), frac(-1, 12)), ((0, 2, 0), frac(-1, 240)), ((0, 0, 1), frac(1, 24))];
        let oracle = eta_oracle(2);
        for (k, v) in &fixtures {
            assert_eq!(oracle.get(k), Some(v));
            assert_eq!(&eta(k.0 as i64, k.1 as i64, k.2 as i64).unwrap(), v);
        }
        assert_eq!(eta(1, 0, 0).unwrap(), rat(1));
        assert_eq!(eta(0, 1, 0).unwrap(), frac(-1, 12));
        assert!(eta(0, -2, 0).is_err());
    }

    #[test]
    fn eta_formula_agrees_with_oracle() {
        for g in 1..=8 {
            let oracle = eta_oracle(g);
            for (a, b, c) in abc_triples(g) {
                let expected = oracle.get(&(a, b, c)).cloned().unwrap_or_else(Rational::zero);
                assert_eq!(eta(a as i64, b as i64, c as i64).unwrap(), expected, "g={g} ({a},{b},{c})");
            }
        }
    }

    #[test]
    fn alpha_positive() {
        for g in 1..=10 {
            assert!(alphas_positive(g), "g = {g}");
        }
    }

    #[test]
    fn boundary_examples() {
        let vars = VarSet::canonical();
        let p = |s| Polynomial::parse(&vars, s).unwrap();
        assert_eq!(boundary_zero_section(&RingContext::new(1).unwrap()), p("xi"));
        assert_eq!(boundary_zero_section(&RingContext::new(2).unwrap()), p("xi*T1"));
        assert_eq!(boundary_zero_section(&RingContext::new(3).unwrap()), p("1/2*xi*T1^2"));
    }

    #[test]
    fn assemble_low_genus() {
        let c1 = RingContext::new(1).unwrap();
        let expected =
            substitute_generators(&Polynomial::parse(&VarSet::invariant(), "Theta - 1/8*D + 1/24*D").unwrap()).unwrap();
        assert_eq!(assemble_main_rhs(&c1, InvariantBasis::Alpha), expected);
        let c2 = RingContext::new(2).unwrap();
        let nf = c2.normal_form(&assemble_main_rhs(&c2, InvariantBasis::Alpha)).unwrap();
        assert_eq!(nf, Polynomial::parse(&VarSet::canonical(), "xi*T1").unwrap());
        for g in 1..=4 {
            let ctx = RingContext::new(g).unwrap();
            assert_eq!(assemble_main_rhs(&ctx, InvariantBasis::Alpha), assemble_main_rhs(&ctx, InvariantBasis::Eta));
        }
    }

    #[test]
    fn verifiers_low_genus() {
        for g in 1..=4 {
            assert!(verify_main(g).unwrap().holds, "main g={g}");
            assert!(verify_eta_alpha(g).unwrap().holds, "eta g={g}");
            assert!(verify_triangular(g).unwrap().holds, "triangular g={g}");
            assert!(verify_invariance(g).unwrap().holds, "invariance g={g}");
        }
        assert!(verify_main(0).is_err());
    }

    #[test]
    fn xi_ambiguity() {
        for g in 1..=5 {
            let ctx = RingContext::new(g).unwrap();
            let vars = ctx.vars().clone();
            let alt = (&Polynomial::parse(&vars, "xi + P").unwrap()
                * &Polynomial::var(&vars, "T1").unwrap().pow(g as u32 - 1))
                .scale(&fact_q(g - 1).recip());
            let diff = &assemble_main_rhs(&ctx, InvariantBasis::Alpha) - &alt;
            assert!(ctx.is_zero(&diff).unwrap(), "g = {g}");
        }
    }

    #[test]
    fn maple_examples() {
        // single-term case
        assert!(maple_constant(4, 0).unwrap().is_some());
        let r: Vec<Rational> = (0..=2).map(|l| maple_ratio(4, 2, l).unwrap()).collect();
        assert!(r.windows(2).all(|w| w[0] == w[1]));
        assert!(maple_inner_sum(4, 3, 0).is_err());
        assert!(maple_inner_sum(4, 1, 2).is_err());
    }

    #[test]
    fn invariant_coeff_reads_terms() {
        let p = invariant_sum(2, InvariantBasis::Eta);
        assert_eq!(invariant_coeff(&p, (0, 0, 1)), frac(1, 24));
    }
}
