//! Double ramification class over formal divisor symbols.
//!
//! Classes live in the free commutative algebra on the symbols `K_i`,
//! `delta_irr`, `delta_h^P` (codimension one) and `xi_i` (codimension two);
//! no relations among them are imposed.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::chow_ring::abc_triples;
use crate::error::{Error, Result};
use crate::exact_arith::{fact_q, fmt_rational, frac, parse_rational, rat, Rational};
use crate::zero_section::CoefficientTable;

/// Largest supported number of marked points.
pub const MAX_POINTS: usize = 24;

/// Integer weights `d_1..d_n` summing to zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<i64>);

impl WeightVector {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        if weights.is_empty() || weights.len() > MAX_POINTS {
            return Err(Error::InvalidArgument(format!("number of marked points must be between 1 and {MAX_POINTS}")));
        }
        let sum: i64 = weights.iter().sum();
        if sum != 0 {
            return Err(Error::WeightSum(sum));
        }
        Ok(WeightVector(weights))
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `d_P` for a set of 1-based labels.
    pub fn partial_sum(&self, set: &[usize]) -> i64 {
        set.iter().map(|&i| self.0[i - 1]).sum()
    }
}

/// A generator of the formal symbol algebra. Marked points are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DivisorSymbol {
    K(usize),
    DeltaIrr,
    /// `delta_h^P` in canonical form, `P` sorted.
    Delta {
        h: usize,
        set: Vec<usize>,
    },
    Xi(usize),
}

// Packed symbol: kind in the top bits, then h, then the point label or the
// bitmask of P.
type Sym = u64;

const KIND_SHIFT: u32 = 60;
const H_SHIFT: u32 = 32;
const LOW_MASK: u64 = (1 << H_SHIFT) - 1;

fn pack(s: &DivisorSymbol) -> Sym {
    match s {
        DivisorSymbol::K(i) => *i as u64,
        DivisorSymbol::DeltaIrr => 1 << KIND_SHIFT,
        DivisorSymbol::Delta { h, set } => {
            let mask = set.iter().fold(0u64, |m, &i| m | 1 << (i - 1));
            2 << KIND_SHIFT | (*h as u64) << H_SHIFT | mask
        }
        DivisorSymbol::Xi(i) => 3 << KIND_SHIFT | *i as u64,
    }
}

fn unpack(k: Sym) -> DivisorSymbol {
    let low = k & LOW_MASK;
    match k >> KIND_SHIFT {
        0 => DivisorSymbol::K(low as usize),
        1 => DivisorSymbol::DeltaIrr,
        2 => DivisorSymbol::Delta {
            h: ((k >> H_SHIFT) & ((1 << (KIND_SHIFT - H_SHIFT)) - 1)) as usize,
            set: (1..=32).filter(|i| low >> (i - 1) & 1 == 1).collect(),
        },
        _ => DivisorSymbol::Xi(low as usize),
    }
}

fn sym_codim(k: Sym) -> usize {
    if k >> KIND_SHIFT == 3 {
        2
    } else {
        1
    }
}

fn is_compact_type(k: Sym) -> bool {
    matches!(k >> KIND_SHIFT, 0 | 2)
}

impl DivisorSymbol {
    pub fn codim(&self) -> usize {
        match self {
            DivisorSymbol::Xi(_) => 2,
            _ => 1,
        }
    }

    /// `delta_h^P` canonicalized under `delta_h^P = delta_{g-h}^{P^c}`: the
    /// representative with smaller `h`, ties broken by the side containing
    /// point 1.
    pub fn delta(g: usize, n: usize, h: usize, set: &[usize]) -> Result<DivisorSymbol> {
        if h > g {
            return Err(Error::InvalidArgument(format!("delta_{h} with genus {g}")));
        }
        let mut p: Vec<usize> = set.to_vec();
        p.sort_unstable();
        p.dedup();
        if p.len() != set.len() || p.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::InvalidArgument(format!("bad marked-point set {set:?} for n = {n}")));
        }
        let complement: Vec<usize> = (1..=n).filter(|i| p.binary_search(i).is_err()).collect();
        let (h, p) = if g - h < h || (2 * h == g && !p.contains(&1)) { (g - h, complement) } else { (h, p) };
        let other_side = n - p.len();
        if (h == 0 && p.len() < 2) || (h == g && other_side < 2) {
            return Err(Error::InvalidArgument("a genus-0 side needs at least two marked points".into()));
        }
        Ok(DivisorSymbol::Delta { h, set: p })
    }

    fn relabel(&self, g: usize, n: usize, perm: &[usize]) -> DivisorSymbol {
        match self {
            DivisorSymbol::K(i) => DivisorSymbol::K(perm[i - 1]),
            DivisorSymbol::Xi(i) => DivisorSymbol::Xi(perm[i - 1]),
            DivisorSymbol::DeltaIrr => DivisorSymbol::DeltaIrr,
            DivisorSymbol::Delta { h, set } => {
                let mapped: Vec<usize> = set.iter().map(|&i| perm[i - 1]).collect();
                DivisorSymbol::delta(g, n, *h, &mapped).expect("relabeling preserves validity")
            }
        }
    }

    fn latex(&self) -> String {
        match self {
            DivisorSymbol::K(i) => format!("K_{{{i}}}"),
            DivisorSymbol::DeltaIrr => "\\delta_{irr}".to_string(),
            DivisorSymbol::Delta { h, set } => {
                let s: Vec<String> = set.iter().map(usize::to_string).collect();
                format!("\\delta_{{{h}}}^{{\\{{{}\\}}}}", s.join(","))
            }
            DivisorSymbol::Xi(i) => format!("\\xi_{{{i}}}"),
        }
    }

    fn write_json(&self, power: u32, out: &mut String) {
        let _ = match self {
            DivisorSymbol::K(i) => write!(out, r#"{{"kind":"K","i":{i},"power":{power}}}"#),
            DivisorSymbol::DeltaIrr => write!(out, r#"{{"kind":"delta_irr","power":{power}}}"#),
            DivisorSymbol::Delta { h, set } => {
                let s: Vec<String> = set.iter().map(usize::to_string).collect();
                write!(out, r#"{{"kind":"delta","h":{h},"P":[{}],"power":{power}}}"#, s.join(","))
            }
            DivisorSymbol::Xi(i) => write!(out, r#"{{"kind":"xi","i":{i},"power":{power}}}"#),
        };
    }
}

impl fmt::Display for DivisorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorSymbol::K(i) => write!(f, "K{i}"),
            DivisorSymbol::DeltaIrr => write!(f, "delta_irr"),
            DivisorSymbol::Delta { h, set } => {
                let s: Vec<String> = set.iter().map(usize::to_string).collect();
                write!(f, "delta_{h}^{{{}}}", s.join(","))
            }
            DivisorSymbol::Xi(i) => write!(f, "xi{i}"),
        }
    }
}

/// Product of symbol powers.
pub type SymbolMonomial = Vec<(DivisorSymbol, u32)>;

// Sorted by packed symbol, no zero powers.
type Mono = Box<[(Sym, u32)]>;

fn mono_mul(a: &[(Sym, u32)], b: &[(Sym, u32)]) -> Mono {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out.into_boxed_slice()
}

fn mono_from(symbols: &[(DivisorSymbol, u32)]) -> Mono {
    let mut map: BTreeMap<Sym, u32> = BTreeMap::new();
    for (s, e) in symbols {
        *map.entry(pack(s)).or_insert(0) += e;
    }
    map.into_iter().filter(|(_, e)| *e > 0).collect()
}

fn mono_codim(m: &[(Sym, u32)]) -> usize {
    m.iter().map(|&(s, e)| sym_codim(s) * e as usize).sum()
}

fn mono_symbols(m: &[(Sym, u32)]) -> SymbolMonomial {
    m.iter().map(|&(s, e)| (unpack(s), e)).collect()
}

/// Output flavour for [`FormalClass::serialize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassFormat {
    Text,
    Latex,
    Json,
}

/// Polynomial in divisor symbols with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalClass {
    pub g: usize,
    pub n: usize,
    pub weights: Vec<i64>,
    terms: BTreeMap<Mono, Rational>,
}

impl FormalClass {
    pub fn zero(g: usize, n: usize, weights: &[i64]) -> Self {
        FormalClass { g, n, weights: weights.to_vec(), terms: BTreeMap::new() }
    }

    pub fn one(g: usize, n: usize, weights: &[i64]) -> Self {
        let mut c = Self::zero(g, n, weights);
        c.terms.insert(Box::new([]), Rational::one());
        c
    }

    pub fn symbol(g: usize, n: usize, weights: &[i64], s: DivisorSymbol, coeff: Rational) -> Self {
        let mut c = Self::zero(g, n, weights);
        c.add_term(mono_from(&[(s, 1)]), coeff);
        c
    }

    fn empty_like(&self) -> Self {
        Self::zero(self.g, self.n, &self.weights)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in a fixed deterministic order.
    pub fn terms(&self) -> impl Iterator<Item = (SymbolMonomial, &Rational)> {
        self.terms.iter().map(|(m, c)| (mono_symbols(m), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a monomial given as (symbol, power) pairs in any order.
    pub fn coeff(&self, mono: &[(DivisorSymbol, u32)]) -> Rational {
        self.terms.get(&mono_from(mono)).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &FormalClass) -> FormalClass {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &FormalClass) -> FormalClass {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> FormalClass {
        let mut out = self.empty_like();
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        out
    }

    /// `self += c * a * b`.
    fn add_product(&mut self, a: &FormalClass, b: &FormalClass, c: &Rational) {
        for (ma, ca) in &a.terms {
            let cac = ca * c;
            for (mb, cb) in &b.terms {
                self.add_term(mono_mul(ma, mb), &cac * cb);
            }
        }
    }

    pub fn mul(&self, other: &FormalClass) -> FormalClass {
        let mut out = self.empty_like();
        out.add_product(self, other, &Rational::one());
        out
    }

    pub fn pow(&self, e: u32) -> FormalClass {
        let mut out = Self::one(self.g, self.n, &self.weights);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Codimensions of all terms, ascending and deduplicated.
    pub fn codims(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().map(|m| mono_codim(m)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Common codimension of all terms, `None` if zero or inhomogeneous.
    pub fn codim(&self) -> Option<usize> {
        match self.codims().as_slice() {
            [c] => Some(*c),
            _ => None,
        }
    }

    /// Drops every term containing `delta_irr` or some `xi_i`.
    pub fn specialize_compact_type(&self) -> FormalClass {
        let mut out = self.clone();
        out.terms.retain(|m, _| m.iter().all(|&(s, _)| is_compact_type(s)));
        out
    }

    /// Applies the relabeling `i -> perm[i-1]` of marked points to symbols
    /// and weights.
    pub fn relabel(&self, perm: &[usize]) -> FormalClass {
        assert_eq!(perm.len(), self.n);
        let mut weights = vec![0; self.n];
        for (i, &w) in self.weights.iter().enumerate() {
            weights[perm[i] - 1] = w;
        }
        let mut out = Self::zero(self.g, self.n, &weights);
        for (m, c) in &self.terms {
            let mapped: SymbolMonomial = m.iter().map(|&(s, e)| (unpack(s).relabel(self.g, self.n, perm), e)).collect();
            out.add_term(mono_from(&mapped), c.clone());
        }
        out
    }

    pub fn serialize(&self, mode: ClassFormat) -> String {
        match mode {
            ClassFormat::Json => self.json_string(),
            ClassFormat::Text => self.render(
                |s| s.to_string(),
                |b, e| if b.contains('^') { format!("({b})^{e}") } else { format!("{b}^{e}") },
                "*",
                fmt_rational,
            ),
            ClassFormat::Latex => self.render(
                DivisorSymbol::latex,
                |b, e| {
                    if b.contains('^') {
                        format!("({b})^{{{e}}}")
                    } else {
                        format!("{b}^{{{e}}}")
                    }
                },
                " ",
                |q| {
                    if q.denom().is_one() {
                        q.numer().to_string()
                    } else {
                        format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom())
                    }
                },
            ),
        }
    }

    fn render(
        &self,
        sym: impl Fn(&DivisorSymbol) -> String,
        power: impl Fn(&str, u32) -> String,
        sep: &str,
        coeff: impl Fn(&Rational) -> String,
    ) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let factors: Vec<String> = m
                .iter()
                .map(|&(s, e)| {
                    let b = sym(&unpack(s));
                    if e == 1 {
                        b
                    } else {
                        power(&b, e)
                    }
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&coeff(&abs));
                continue;
            }
            if !abs.is_one() {
                out.push_str(&coeff(&abs));
                out.push_str(sep);
            }
            out.push_str(&factors.join(sep));
        }
        out
    }

    // Same document as `to_json`, written directly; large classes would not
    // fit comfortably as a `Value` tree.
    fn json_string(&self) -> String {
        let mut out = String::new();
        let weights: Vec<String> = self.weights.iter().map(i64::to_string).collect();
        let codim = self.codim().map_or("null".to_string(), |c| c.to_string());
        let _ = write!(out, r#"{{"codim":{codim},"g":{},"n":{},"terms":["#, self.g, self.n);
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                out.push(',');
            }
            let _ = write!(out, r#"{{"coeff":"{}","symbols":["#, fmt_rational(c));
            for (j, &(s, e)) in m.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                unpack(s).write_json(e, &mut out);
            }
            out.push_str("]}");
        }
        let _ = write!(out, r#"],"weights":[{}]}}"#, weights.join(","));
        out
    }

    pub fn to_json(&self) -> Value {
        serde_json::from_str(&self.json_string()).expect("class JSON is well formed")
    }

    pub fn from_json(value: &Value) -> Result<FormalClass> {
        let bad = |msg: &str| Error::Malformed(format!("class JSON: {msg}"));
        let uint = |v: &Value, key: &str| -> Result<usize> {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| bad(&format!("missing or bad \"{key}\"")))
        };
        let g = uint(value, "g")?;
        let n = uint(value, "n")?;
        if n > MAX_POINTS {
            return Err(bad("too many marked points"));
        }
        let weights: Vec<i64> = value
            .get("weights")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"weights\""))?
            .iter()
            .map(|w| w.as_i64().ok_or_else(|| bad("weights must be integers")))
            .collect::<Result<_>>()?;
        let mut out = FormalClass::zero(g, n, &weights);
        let terms = value.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing \"terms\""))?;
        for t in terms {
            let coeff =
                parse_rational(t.get("coeff").and_then(Value::as_str).ok_or_else(|| bad("term without coeff"))?)?;
            let mut mono = Vec::new();
            for s in t.get("symbols").and_then(Value::as_array).ok_or_else(|| bad("term without symbols"))? {
                let power = s.get("power").and_then(Value::as_u64).unwrap_or(1) as u32;
                let point = |s: &Value| -> Result<usize> {
                    let i = uint(s, "i")?;
                    if i == 0 || i > n {
                        return Err(bad("point label out of range"));
                    }
                    Ok(i)
                };
                let sym = match s.get("kind").and_then(Value::as_str) {
                    Some("K") => DivisorSymbol::K(point(s)?),
                    Some("xi") => DivisorSymbol::Xi(point(s)?),
                    Some("delta_irr") => DivisorSymbol::DeltaIrr,
                    Some("delta") => {
                        let set: Vec<usize> = s
                            .get("P")
                            .and_then(Value::as_array)
                            .ok_or_else(|| bad("delta without P"))?
                            .iter()
                            .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(|| bad("bad point label")))
                            .collect::<Result<_>>()?;
                        DivisorSymbol::delta(g, n, uint(s, "h")?, &set)?
                    }
                    _ => return Err(bad("unknown symbol kind")),
                };
                mono.push((sym, power));
            }
            out.add_term(mono_from(&mono), coeff);
        }
        Ok(out)
    }
}

fn check_genus(g: usize) -> Result<()> {
    if g == 0 {
        return Err(Error::InvalidArgument("genus must be at least 1".into()));
    }
    Ok(())
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..1 << n).map(move |mask| (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect())
}

/// Pullback of `Theta` under the Abel-Jacobi map for weights `d`.
pub fn pullback_theta(g: usize, d: &WeightVector) -> Result<FormalClass> {
    check_genus(g)?;
    let n = d.n();
    let w = d.as_slice();
    let half = frac(1, 2);
    let mut out = FormalClass::zero(g, n, w);
    for i in 1..=n {
        out.add_term(mono_from(&[(DivisorSymbol::K(i), 1)]), &half * rat(w[i - 1] * w[i - 1]));
    }
    for set in subsets(n) {
        let dp = d.partial_sum(&set);
        if set.len() >= 2 {
            let sq: i64 = set.iter().map(|&i| w[i - 1] * w[i - 1]).sum();
            let c = -&half * rat(dp * dp - sq);
            if !c.is_zero() {
                out.add_term(mono_from(&[(DivisorSymbol::delta(g, n, 0, &set)?, 1)]), c);
            }
        }
        for h in 1..=g / 2 {
            if 2 * h == g && !set.contains(&1) {
                continue;
            }
            let c = -&half * rat(dp * dp);
            if !c.is_zero() {
                out.add_term(mono_from(&[(DivisorSymbol::delta(g, n, h, &set)?, 1)]), c);
            }
        }
    }
    Ok(out)
}

/// Pullback of the boundary divisor `D`: `delta_irr`.
pub fn pullback_d(g: usize, d: &WeightVector) -> FormalClass {
    FormalClass::symbol(g, d.n(), d.as_slice(), DivisorSymbol::DeltaIrr, Rational::one())
}

/// Pullback of the gluing locus `Delta`: `sum |d_i| xi_i`.
pub fn pullback_delta(g: usize, d: &WeightVector) -> FormalClass {
    let w = d.as_slice();
    let mut out = FormalClass::zero(g, d.n(), w);
    for (i, &di) in w.iter().enumerate() {
        out.add_term(mono_from(&[(DivisorSymbol::Xi(i + 1), 1)]), rat(di.abs()));
    }
    out
}

/// `sum eta_{a,b,c} (s^* Theta)^a delta_irr^b (s^* Delta)^c`.
pub fn dr_class(g: usize, d: &WeightVector) -> Result<FormalClass> {
    check_genus(g)?;
    let theta = pullback_theta(g, d)?;
    let dirr = pullback_d(g, d);
    let delta = pullback_delta(g, d);
    let table = CoefficientTable::for_genus(g);

    // theta^{a-1}, so that the largest power is never materialized
    let mut theta_pows = vec![FormalClass::one(g, d.n(), d.as_slice())];
    for a in 1..g {
        theta_pows.push(theta_pows[a - 1].mul(&theta));
    }
    let mut out = FormalClass::zero(g, d.n(), d.as_slice());
    for (a, b, c) in abc_triples(g) {
        let eta = table.eta((a, b, c)).expect("complete table");
        let rest = dirr.pow(b).mul(&delta.pow(c));
        if a == 0 {
            out.add_product(&rest, &FormalClass::one(g, d.n(), d.as_slice()), eta);
        } else {
            let tail = theta.mul(&rest);
            out.add_product(&theta_pows[a as usize - 1], &tail, eta);
        }
    }
    Ok(out)
}

/// `(s^* Theta)^g / g!`, the compact-type restriction of [`dr_class`].
pub fn compact_type_formula(g: usize, d: &WeightVector) -> Result<FormalClass> {
    let theta = pullback_theta(g, d)?;
    let prev = theta.pow(g as u32 - 1);
    let mut out = theta.empty_like();
    out.add_product(&prev, &theta, &fact_q(g).recip());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use serde_json::json;

    fn wv(v: &[i64]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn weight_validation() {
        assert_eq!(WeightVector::new(vec![1, 1]), Err(Error::WeightSum(2)));
        assert!(WeightVector::new(vec![]).is_err());
        assert!(WeightVector::new(vec![0]).is_ok());
    }

    #[test]
    fn delta_canonical_form() {
        let a = DivisorSymbol::delta(3, 3, 2, &[1]).unwrap();
        assert_eq!(a, DivisorSymbol::Delta { h: 1, set: vec![2, 3] });
        let b = DivisorSymbol::delta(2, 3, 1, &[2]).unwrap();
        assert_eq!(b, DivisorSymbol::Delta { h: 1, set: vec![1, 3] });
        assert_eq!(DivisorSymbol::delta(2, 3, 2, &[]).unwrap(), DivisorSymbol::Delta { h: 0, set: vec![1, 2, 3] });
        assert!(DivisorSymbol::delta(2, 3, 0, &[1]).is_err());
        assert!(DivisorSymbol::delta(2, 3, 3, &[1]).is_err());
        assert!(DivisorSymbol::delta(2, 3, 1, &[4]).is_err());
    }

    #[test]
    fn theta_examples() {
        assert!(pullback_theta(2, &wv(&[0, 0, 0])).unwrap().is_zero());
        let t = pullback_theta(1, &wv(&[1, -1])).unwrap();
        assert_eq!(t.coeff(&[(DivisorSymbol::K(1), 1)]), frac(1, 2));
        assert_eq!(t.coeff(&[(DivisorSymbol::K(2), 1)]), frac(1, 2));
        assert_eq!(t.coeff(&[(DivisorSymbol::Delta { h: 0, set: vec![1, 2] }, 1)]), rat(1));
        assert_eq!(t.len(), 3);
        // genus 2: delta_1^{1} = delta_1^{2}, coefficient -1/2
        let t2 = pullback_theta(2, &wv(&[1, -1])).unwrap();
        assert_eq!(t2.coeff(&[(DivisorSymbol::Delta { h: 1, set: vec![1] }, 1)]), frac(-1, 2));
        assert_eq!(t2.len(), 4);
    }

    #[test]
    fn delta_and_d_pullbacks() {
        let d = wv(&[2, -2]);
        assert_eq!(pullback_d(1, &d).serialize(ClassFormat::Text), "delta_irr");
        assert_eq!(pullback_delta(1, &d).serialize(ClassFormat::Text), "2*xi1 + 2*xi2");
        assert_eq!(pullback_delta(1, &wv(&[1, 0, -1])).serialize(ClassFormat::Text), "xi1 + xi3");
    }

    #[test]
    fn genus_one_and_two() {
        let d = wv(&[1, -1]);
        let c1 = dr_class(1, &d).unwrap();
        let expected = pullback_theta(1, &d).unwrap().add(&pullback_d(1, &d).scale(&frac(-1, 12)));
        assert_eq!(c1, expected);

        let c2 = dr_class(2, &d).unwrap();
        let th = pullback_theta(2, &d).unwrap();
        let di = pullback_d(2, &d);
        let de = pullback_delta(2, &d);
        let expected = th
            .pow(2)
            .scale(&frac(1, 2))
            .add(&th.mul(&di).scale(&frac(-1, 12)))
            .add(&di.pow(2).scale(&frac(-1, 240)))
            .add(&de.scale(&frac(1, 24)));
        assert_eq!(c2, expected);
        assert_eq!(c2.codim(), Some(2));
    }

    #[test]
    fn compact_type_examples() {
        let d = wv(&[1, -1]);
        let fc = pullback_d(2, &d);
        assert!(fc.specialize_compact_type().is_zero());
        let th = pullback_theta(2, &d).unwrap();
        assert_eq!(th.specialize_compact_type(), th);
        assert_eq!(dr_class(2, &d).unwrap().specialize_compact_type(), compact_type_formula(2, &d).unwrap());
    }

    #[test]
    fn serialization() {
        let z = FormalClass::zero(1, 2, &[1, -1]);
        assert_eq!(z.serialize(ClassFormat::Text), "0");
        assert_eq!(z.to_json()["terms"], json!([]));
        let k = FormalClass::symbol(1, 2, &[1, -1], DivisorSymbol::K(1), frac(1, 2));
        assert_eq!(k.to_json()["terms"], json!([{ "coeff": "1/2", "symbols": [{ "kind": "K", "i": 1, "power": 1 }] }]));
        let c = dr_class(2, &wv(&[2, -1, -1])).unwrap();
        assert_eq!(FormalClass::from_json(&c.to_json()).unwrap(), c);
        let latex = c.serialize(ClassFormat::Latex);
        assert!(latex.contains("\\delta_{irr}") && latex.contains("\\xi_{1}") && latex.contains("K_{1}"));
        assert!(latex.contains("\\delta_{0}^{\\{2,3\\}}"));
    }

    fn weights() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-3i64..=3, 1..=4).prop_map(|mut v| {
            let s: i64 = v.iter().sum();
            v.push(-s);
            v
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn homogeneous_of_codim_g(g in 1usize..=3, w in weights()) {
            let c = dr_class(g, &WeightVector::new(w).unwrap()).unwrap();
            prop_assert!(c.is_zero() || c.codim() == Some(g));
        }

        #[test]
        fn theta_even_in_weights(g in 1usize..=4, w in weights()) {
            let neg: Vec<i64> = w.iter().map(|x| -x).collect();
            let a = pullback_theta(g, &WeightVector::new(w).unwrap()).unwrap();
            let b = pullback_theta(g, &WeightVector::new(neg.clone()).unwrap()).unwrap();
            prop_assert_eq!(a.terms, b.terms);
        }

        #[test]
        fn relabeling_equivariance(g in 1usize..=3, w in weights(), seed in any::<u64>()) {
            let n = w.len();
            let mut perm: Vec<usize> = (1..=n).collect();
            // Fisher-Yates with a small LCG
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let c = dr_class(g, &WeightVector::new(w.clone()).unwrap()).unwrap();
            let moved = c.relabel(&perm);
            let direct = dr_class(g, &WeightVector::new(moved.weights.clone()).unwrap()).unwrap();
            prop_assert_eq!(moved, direct);
        }
    }
}
