//! The genus-`g` quotient rings
//!
//! ```text
//! R  = Q[T1, P, T2] / I_g,   I_g = coefficients in n of (T1 + n P + n^2 T2)^g
//! R~ = R[xi] / (xi^2 - xi P)
//! ```
//!
//! Elements are carried as polynomials over the canonical variable set
//! `(xi, T1, P, T2)`. Ideal membership is decided per total degree by
//! reducing against a cached reduced row echelon basis of the degree-`k`
//! piece of `I_g`, which is spanned by `(monomial of degree k - g) * relation`.
//! `R~` is free over `R` on `{1, xi}`, so an element `f0 + xi f1` vanishes
//! iff both `f0` and `f1` lie in `I_g`.

mod cache;
mod operators;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_arith::{fact_q, Rational};
use crate::linalg::Matrix;
use crate::poly::{Monomial, Polynomial, VarSet};

pub use cache::CACHE_FORMAT_VERSION;
pub use operators::{
    half_shift, invariant_generators, involution_j, restrict_infty, restrict_zero, shift, InvariantGenerators,
};

pub(crate) const XI: usize = 0;
pub(crate) const T1: usize = 1;
pub(crate) const P: usize = 2;
pub(crate) const T2: usize = 3;

/// Reduced row echelon basis of `I_g` in one total degree.
#[derive(Debug)]
pub(crate) struct Echelon {
    /// xi-free monomials of the degree, in descending order.
    columns: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn from_parts(columns: Vec<Monomial>, rows: Vec<Vec<Rational>>, pivots: Vec<usize>) -> Self {
        let index = columns.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Echelon { columns, index, rows, pivots }
    }

    fn is_pivot(&self, col: usize) -> bool {
        self.pivots.binary_search(&col).is_ok()
    }

    fn reduce(&self, vec: &mut [Rational]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if vec[pc].is_zero() {
                continue;
            }
            let f = vec[pc].clone();
            for (v, r) in vec.iter_mut().zip(row) {
                if !r.is_zero() {
                    *v -= &f * r;
                }
            }
        }
    }
}

/// Which product basis [`RingContext::express_in_invariants`] solves in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InvariantBasis {
    /// `(Theta - D/8)^a D^b (Delta - 2 Theta D)^c`
    Alpha,
    /// `Theta^a D^b Delta^c`
    Eta,
}

/// One solution of an invariant-basis expansion plus the dimension of the
/// solution space's direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantExpression {
    pub coefficients: BTreeMap<(u32, u32, u32), Rational>,
    pub kernel_dimension: usize,
}

/// Gram matrix of the socle pairing `R^{g-1-k} x R^{g-1+k} -> Q`.
#[derive(Debug, Clone)]
pub struct Pairing {
    pub k: usize,
    pub row_basis: Vec<Polynomial>,
    pub col_basis: Vec<Polynomial>,
    pub matrix: Matrix,
}

impl Pairing {
    pub fn determinant(&self) -> Rational {
        self.matrix.determinant()
    }
}

/// Quotient-ring environment for one genus.
#[derive(Debug)]
pub struct RingContext {
    genus: usize,
    vars: VarSet,
    relations: Vec<Polynomial>,
    cache: RwLock<HashMap<usize, Arc<Echelon>>>,
}

/// All triples `(a, b, c)` with `a + b + 2c = k`, ordered by `c` then `b`.
pub fn abc_triples(k: usize) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for c in 0..=k / 2 {
        for b in 0..=k - 2 * c {
            out.push(((k - 2 * c - b) as u32, b as u32, c as u32));
        }
    }
    out
}

impl RingContext {
    /// Builds the context for genus `g >= 1`.
    pub fn new(g: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidArgument("genus must be at least 1".into()));
        }
        let relations = generating_relations(g);
        Ok(RingContext { genus: g, vars: VarSet::canonical(), relations, cache: RwLock::new(HashMap::new()) })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    /// The `2g + 1` generating relations; entry `j` is the coefficient of
    /// `n^j` and has `d`-grade `g - j`.
    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    /// The relation of `d`-grade `l`, for `-g <= l <= g`.
    pub fn relation(&self, l: i64) -> Option<&Polynomial> {
        let j = self.genus as i64 - l;
        usize::try_from(j).ok().and_then(|j| self.relations.get(j))
    }

    pub(crate) fn echelon(&self, k: usize) -> Arc<Echelon> {
        if let Some(e) = self.cache.read().expect("echelon cache poisoned").get(&k) {
            return e.clone();
        }
        let built = Arc::new(self.build_echelon(k));
        let mut w = self.cache.write().expect("echelon cache poisoned");
        w.entry(k).or_insert(built).clone()
    }

    /// xi-free monomials of degree `k` in descending reduction order:
    /// graded lexicographic with precedence `P > T1 > T2`.
    pub(crate) fn degree_columns(k: usize) -> Vec<Monomial> {
        Monomial::all_of_degree(3, k)
            .into_iter()
            .map(|m| {
                let (p, t1, t2) = (m.exp(0), m.exp(1), m.exp(2));
                Monomial::new(vec![0, t1, p, t2])
            })
            .collect()
    }

    fn build_echelon(&self, k: usize) -> Echelon {
        let columns = Self::degree_columns(k);
        if k < self.genus {
            return Echelon::from_parts(columns, Vec::new(), Vec::new());
        }
        let index: HashMap<&Monomial, usize> = columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let multipliers = Self::degree_columns(k - self.genus);
        let mut mat = Matrix::zeros(multipliers.len() * self.relations.len(), columns.len());
        let mut r = 0;
        for mult in &multipliers {
            for rel in &self.relations {
                for (m, c) in rel.terms() {
                    mat.set(r, index[&m.mul(mult)], c.clone());
                }
                r += 1;
            }
        }
        let pivots = mat.rref();
        Echelon::from_parts(columns, mat.to_rows(), pivots)
    }

    fn check_vars(&self, p: &Polynomial) -> Result<()> {
        if p.vars() != &self.vars {
            return Err(Error::VarSetMismatch { left: p.vars().names().join(","), right: self.vars.names().join(",") });
        }
        Ok(())
    }

    /// Reduces a xi-free polynomial modulo `I_g`.
    fn reduce_xi_free(&self, f: &Polynomial) -> Polynomial {
        let Some(top) = f.degree() else {
            return f.clone();
        };
        let mut out = f.filter(|m| m.degree() < self.genus);
        for k in self.genus..=top {
            let piece = f.graded_piece(k);
            if piece.is_zero() {
                continue;
            }
            let ech = self.echelon(k);
            let mut v = vec![Rational::zero(); ech.columns.len()];
            for (m, c) in piece.terms() {
                v[ech.index[m]] = c.clone();
            }
            ech.reduce(&mut v);
            for (m, c) in ech.columns.iter().zip(v) {
                out.add_term(m.clone(), c);
            }
        }
        out
    }

    /// Splits `p` into `(f0, f1)` with `p = f0 + xi f1` modulo `xi^2 = xi P`.
    pub fn split_xi(&self, p: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check_vars(p)?;
        let lowered = p.map_monomials(|m| {
            let e = m.exp(XI);
            if e >= 2 {
                m.with_exp(XI, 1).with_exp(P, m.exp(P) + e - 1)
            } else {
                m.clone()
            }
        });
        let f0 = lowered.filter(|m| m.exp(XI) == 0);
        let f1 = lowered.filter(|m| m.exp(XI) == 1).map_monomials(|m| m.with_exp(XI, 0));
        Ok((f0, f1))
    }

    /// Canonical representative of `p` in `R~`.
    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        let (f0, f1) = self.split_xi(p)?;
        let r0 = self.reduce_xi_free(&f0);
        let r1 = self.reduce_xi_free(&f1).map_monomials(|m| m.with_exp(XI, 1));
        Ok(&r0 + &r1)
    }

    pub fn is_zero(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// `dim R^k`, or `dim R^k_l` when `l` is given.
    pub fn dim_graded(&self, k: usize, l: Option<i64>) -> usize {
        let ech = self.echelon(k);
        let grade = |m: &Monomial| m.exp(T1) as i64 - m.exp(T2) as i64;
        match l {
            None => ech.columns.len() - ech.pivots.len(),
            Some(l) => ech.columns.iter().enumerate().filter(|(i, m)| grade(m) == l && !ech.is_pivot(*i)).count(),
        }
    }

    /// Standard monomials of `R^k` (non-pivot columns), descending.
    pub fn basis(&self, k: usize) -> Vec<Polynomial> {
        let ech = self.echelon(k);
        ech.columns
            .iter()
            .enumerate()
            .filter(|(i, _)| !ech.is_pivot(*i))
            .map(|(_, m)| Polynomial::monomial(&self.vars, m.clone(), Rational::from_integer(1.into())))
            .collect()
    }

    /// Pushforward of a degree `2g - 2` class of `R` to the base, normalized
    /// by `h_*(T1^{g-1} T2^{g-1}) = ((g-1)!)^2`.
    pub fn socle_pushforward(&self, p: &Polynomial) -> Result<Rational> {
        self.check_vars(p)?;
        if p.is_zero() {
            return Ok(Rational::zero());
        }
        let top = 2 * self.genus - 2;
        if p.degree_in(XI) > 0 {
            return Err(Error::XiPresent);
        }
        if !p.is_homogeneous() || p.degree() != Some(top) {
            return Err(Error::WrongDegree { expected: top });
        }
        let socle = self.basis(top);
        debug_assert_eq!(socle.len(), 1);
        let socle_mono = socle[0].terms().next().expect("socle monomial").0.clone();
        let g1 = (self.genus - 1) as u32;
        let reference =
            Polynomial::monomial(&self.vars, Monomial::new(vec![0, g1, 0, g1]), Rational::from_integer(1.into()));
        let ref_coeff = self.normal_form(&reference)?.coeff(&socle_mono);
        let coeff = self.normal_form(p)?.coeff(&socle_mono);
        let norm = fact_q(self.genus - 1) * fact_q(self.genus - 1);
        Ok(coeff / ref_coeff * norm)
    }

    /// Gram matrix of the pairing into the socle, `0 <= k <= g - 1`.
    pub fn pairing_matrix(&self, k: usize) -> Result<Pairing> {
        if k >= self.genus {
            return Err(Error::OutOfRange(format!("pairing index {k} not in 0..={}", self.genus - 1)));
        }
        let g1 = self.genus - 1;
        let row_basis = self.basis(g1 - k);
        let col_basis = self.basis(g1 + k);
        let mut matrix = Matrix::zeros(row_basis.len(), col_basis.len());
        for (i, a) in row_basis.iter().enumerate() {
            for (j, b) in col_basis.iter().enumerate() {
                matrix.set(i, j, self.socle_pushforward(&(a * b))?);
            }
        }
        Ok(Pairing { k, row_basis, col_basis, matrix })
    }

    /// Basis element of the invariant product basis, as a polynomial in
    /// `(xi, T1, P, T2)`.
    pub fn invariant_monomial(basis: InvariantBasis, (a, b, c): (u32, u32, u32)) -> Polynomial {
        let gens = invariant_generators();
        let (first, third) = match basis {
            InvariantBasis::Alpha => {
                let eighth = Rational::new(1.into(), 8.into());
                (&gens.theta - &gens.d.scale(&eighth), gens.q())
            }
            InvariantBasis::Eta => (gens.theta.clone(), gens.delta.clone()),
        };
        &(&first.pow(a) * &gens.d.pow(b)) * &third.pow(c)
    }

    /// Finds coefficients `c_{a,b,c}`, `a + b + 2c = k`, expressing `p` in
    /// the chosen invariant basis modulo the ideal.
    ///
    /// `p` should be shift- and j-invariant of pure degree `k`; anything
    /// else is reported as [`Error::NotInSpan`] unless it happens to lie in
    /// the span.
    pub fn express_in_invariants(
        &self,
        p: &Polynomial,
        basis: InvariantBasis,
        k: usize,
    ) -> Result<InvariantExpression> {
        self.check_vars(p)?;
        if !p.is_zero() && (!p.is_homogeneous() || p.degree() != Some(k)) {
            return Err(Error::WrongDegree { expected: k });
        }
        let triples = abc_triples(k);
        let images: Vec<Polynomial> =
            triples.iter().map(|&t| self.normal_form(&Self::invariant_monomial(basis, t))).collect::<Result<_>>()?;
        let target = self.normal_form(p)?;

        let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
        for poly in images.iter().chain(std::iter::once(&target)) {
            for (m, _) in poly.terms() {
                let n = rows.len();
                rows.entry(m.clone()).or_insert(n);
            }
        }
        let mut mat = Matrix::zeros(rows.len(), triples.len());
        for (j, img) in images.iter().enumerate() {
            for (m, c) in img.terms() {
                mat.set(rows[m], j, c.clone());
            }
        }
        let mut rhs = vec![Rational::zero(); rows.len()];
        for (m, c) in target.terms() {
            rhs[rows[m]] = c.clone();
        }
        let (x, kernel_dimension) = mat.solve(&rhs).ok_or(Error::NotInSpan)?;
        let coefficients = triples.into_iter().zip(x).filter(|(_, c)| !c.is_zero()).collect();
        Ok(InvariantExpression { coefficients, kernel_dimension })
    }

    /// `shift(restrict_infty(p), 1) == restrict_zero(p)` in `R`.
    pub fn is_shift_invariant(&self, p: &Polynomial) -> Result<bool> {
        self.check_vars(p)?;
        let shifted = shift(&restrict_infty(p), 1)?;
        self.is_zero(&(&shifted - &restrict_zero(p)))
    }

    /// `j(p) == p` in `R~`.
    pub fn is_j_invariant(&self, p: &Polynomial) -> Result<bool> {
        self.check_vars(p)?;
        self.is_zero(&(&involution_j(p) - p))
    }
}

/// Coefficients of `(T1 + n P + n^2 T2)^g` as a polynomial in `n`.
fn generating_relations(g: usize) -> Vec<Polynomial> {
    let aux = VarSet::new(&["xi", "T1", "P", "T2", "n"]).expect("static names");
    let base = Polynomial::parse(&aux, "T1 + n*P + n^2*T2").expect("static expression");
    let expanded = base.pow(g as u32);
    let canonical = VarSet::canonical();
    let mut out = vec![Polynomial::zero(&canonical); 2 * g + 1];
    for (m, c) in expanded.terms() {
        let j = m.exp(4) as usize;
        let mono = Monomial::new(m.exps()[..4].to_vec());
        out[j] = &out[j] + &Polynomial::monomial(&canonical, mono, c.clone());
    }
    out
}


#[cfg(test)]
mod basis_shape {
    use super::*;

    #[test]
    fn standard_monomials_are_t1t2_multiples() {
        for g in 1..=7usize {
            let ctx = RingContext::new(g).unwrap();
            for k in g - 1..=2 * g - 2 {
                let s = (k + 1 - g) as u32;
                for b in ctx.basis(k) {
                    let (m, _) = b.terms().next().unwrap();
                    assert!(m.exp(T1) >= s && m.exp(T2) >= s, "g={g} k={k} {b}");
                }
            }
        }
    }
}
