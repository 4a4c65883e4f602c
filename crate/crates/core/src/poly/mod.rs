//! Sparse multivariate polynomials with exact rational coefficients over a
//! fixed, named variable set.
//!
//! Monomials are ordered graded-lexicographically with variable precedence
//! given by the order of the [`VarSet`]; for the canonical set that is
//! `xi > T1 > P > T2`.

mod format;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::Rational;

pub use format::FormatMode;

/// Names of the canonical ring generators, in precedence order.
pub const CANONICAL_VARS: [&str; 4] = ["xi", "T1", "P", "T2"];
/// Names of the free invariant generators.
pub const INVARIANT_VARS: [&str; 3] = ["Theta", "D", "Delta"];

/// An ordered list of variable names. Two polynomials can only be combined
/// when their variable sets are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarSet(Arc<[String]>);

impl VarSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || names[..i].contains(n) {
                return Err(Error::InvalidArgument(format!("bad or duplicate variable name {n:?}")));
            }
        }
        Ok(VarSet(names.into()))
    }

    /// `(xi, T1, P, T2)`.
    pub fn canonical() -> VarSet {
        static SET: OnceLock<VarSet> = OnceLock::new();
        SET.get_or_init(|| VarSet::new(&CANONICAL_VARS).unwrap()).clone()
    }

    /// `(Theta, D, Delta)`.
    pub fn invariant() -> VarSet {
        static SET: OnceLock<VarSet> = OnceLock::new();
        SET.get_or_init(|| VarSet::new(&INVARIANT_VARS).unwrap()).clone()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    fn check_same(&self, other: &VarSet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::VarSetMismatch { left: self.0.join(","), right: other.0.join(",") })
        }
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarSet({})", self.0.join(","))
    }
}

/// Exponent vector, one entry per variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut m = self.clone();
        m.0[i] = e;
        m
    }

    /// All monomials of total degree `k` in `nvars` variables, in descending
    /// monomial order.
    pub fn all_of_degree(nvars: usize, k: usize) -> Vec<Monomial> {
        fn rec(nvars: usize, k: usize, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == nvars {
                prefix.push(k as u32);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=k).rev() {
                prefix.push(e as u32);
                rec(nvars, k - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if k == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(nvars, k, &mut Vec::with_capacity(nvars), &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial: map from monomial to nonzero rational coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: VarSet,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &VarSet) -> Self {
        Polynomial { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &VarSet, c: Rational) -> Self {
        Self::monomial(vars, Monomial::one(vars.len()), c)
    }

    pub fn monomial(vars: &VarSet, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.0.len(), vars.len(), "monomial arity does not match variable set");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { vars: vars.clone(), terms }
    }

    /// The generator named `name`.
    pub fn var(vars: &VarSet, name: &str) -> Result<Self> {
        let i = vars.index_of(name).ok_or_else(|| Error::UnknownVariable { name: name.to_string(), pos: 0 })?;
        Ok(Self::monomial(vars, Monomial::var(vars.len(), i), Rational::one()))
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, summing
    /// repeated monomials.
    pub fn from_terms<I>(vars: &VarSet, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "monomial arity does not match variable set");
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest total degree of a term, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Largest exponent of variable `i` among all terms.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.vars.check_same(&other.vars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.vars.check_same(&other.vars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.vars.check_same(&other.vars)?;
        let mut acc: std::collections::HashMap<Monomial, Rational> = std::collections::HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                *acc.entry(m).or_insert_with(Rational::zero) += c;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Polynomial { vars: self.vars.clone(), terms })
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Simultaneous substitution `var -> image`. Variables not in `map` are
    /// sent to the same-named variable of the target set, which is the
    /// common variable set of all images (or `self`'s own set when `map` is
    /// empty).
    pub fn substitute(&self, map: &BTreeMap<String, Polynomial>) -> Result<Polynomial> {
        let target = match map.values().next() {
            Some(p) => p.vars.clone(),
            None => self.vars.clone(),
        };
        for (name, img) in map {
            if self.vars.index_of(name).is_none() {
                return Err(Error::UnknownVariable { name: name.clone(), pos: 0 });
            }
            target.check_same(&img.vars)?;
        }
        let mut images = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            let img = match map.get(name) {
                Some(p) => p.clone(),
                None => match target.index_of(name) {
                    Some(_) => Polynomial::var(&target, name)?,
                    None => {
                        return Err(Error::VarSetMismatch {
                            left: self.vars.names().join(","),
                            right: target.names().join(","),
                        })
                    }
                },
            };
            images.push(img);
        }
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|_| vec![Polynomial::one(&target)]).collect();
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Substitution given as `(name, image)` pairs.
    pub fn substitute_pairs(&self, pairs: &[(&str, Polynomial)]) -> Result<Polynomial> {
        let map = pairs.iter().map(|(n, p)| (n.to_string(), p.clone())).collect();
        self.substitute(&map)
    }

    /// Terms of total degree `k`.
    pub fn graded_piece(&self, k: usize) -> Polynomial {
        self.filter(|m| m.degree() == k)
    }

    /// Terms of `d`-grade `l`, where `d(T1^a P^b T2^c) = a - c`.
    pub fn d_graded_piece(&self, l: i64) -> Result<Polynomial> {
        let (t1, t2) = self.d_grading_indices()?;
        Ok(self.filter(|m| m.0[t1] as i64 - m.0[t2] as i64 == l))
    }

    /// `d`-grade of a single monomial over a set containing `T1` and `T2`.
    pub fn d_grade_of(&self, m: &Monomial) -> Result<i64> {
        let (t1, t2) = self.d_grading_indices()?;
        Ok(m.0[t1] as i64 - m.0[t2] as i64)
    }

    fn d_grading_indices(&self) -> Result<(usize, usize)> {
        let (Some(t1), Some(t2)) = (self.vars.index_of("T1"), self.vars.index_of("T2")) else {
            return Err(Error::VarSetMismatch { left: self.vars.names().join(","), right: CANONICAL_VARS.join(",") });
        };
        if let Some(x) = self.vars.index_of("xi") {
            if self.degree_in(x) > 0 {
                return Err(Error::XiPresent);
            }
        }
        Ok((t1, t2))
    }

    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Applies `f` to every monomial, summing collisions.
    pub fn map_monomials<F: Fn(&Monomial) -> Monomial>(&self, f: F) -> Polynomial {
        Polynomial::from_terms(&self.vars, self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    pub fn parse(vars: &VarSet, text: &str) -> Result<Polynomial> {
        parse::parse(vars, text)
    }

    pub fn format(&self, mode: FormatMode) -> String {
        format::format(self, mode)
    }

    /// JSON object `{ "vars": [...], "terms": [{ "coeff": "p/q", "exps": [...] }] }`.
    pub fn to_json(&self) -> serde_json::Value {
        format::to_json(self)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Polynomial> {
        format::from_json(value)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(FormatMode::Text))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.vars.names().join(","), self)
    }
}

// Operator forms panic on a variable-set mismatch; the named methods return
// an error instead.

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs).expect("variable set mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::sub(self, rhs).expect("variable set mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs).expect("variable set mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
