//! Exact scalars and the combinatorial number functions used by the
//! coefficient formulas.
//!
//! All values are exact; the memo tables are grown on demand behind a mutex,
//! so every function here may be called from several threads.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`. Panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = n.parse().map_err(|_| Error::Malformed(format!("bad rational literal {s:?}")))?;
    let den: BigInt = d.parse().map_err(|_| Error::Malformed(format!("bad rational literal {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Malformed(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// `(-1)^e`.
pub fn sign(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn factorial_table() -> &'static Mutex<Vec<BigInt>> {
    static TABLE: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![BigInt::one()]))
}

fn bernoulli_table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// `n!` for a non-negative machine integer.
pub fn fact(n: usize) -> BigInt {
    let mut table = factorial_table().lock().expect("factorial table poisoned");
    while table.len() <= n {
        let next = table.last().unwrap() * BigInt::from(table.len());
        table.push(next);
    }
    table[n].clone()
}

/// `n!` as a rational.
pub fn fact_q(n: usize) -> Rational {
    Rational::from_integer(fact(n))
}

/// `n!`, rejecting negative input.
pub fn factorial(n: i64) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("factorial of negative {n}")));
    }
    Ok(fact(n as usize))
}

/// `C(n, k)` for `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> Result<BigInt> {
    if n < 0 || k < 0 {
        return Err(Error::InvalidArgument(format!("binomial({n}, {k}) with negative input")));
    }
    if k > n {
        return Err(Error::InvalidArgument(format!("binomial({n}, {k}) with k > n")));
    }
    let (n, k) = (n as usize, k as usize);
    Ok(fact(n) / (fact(k) * fact(n - k)))
}

/// `n!!` for odd `n >= -1`, with `(-1)!! = 1`.
pub fn double_factorial(n: i64) -> Result<BigInt> {
    if n < -1 || n.rem_euclid(2) == 0 {
        return Err(Error::InvalidArgument(format!("double factorial is only defined here for odd n >= -1, got {n}")));
    }
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Ok(acc)
}

/// `n!!` as a rational; panics on invalid input (internal use by formulas
/// whose index arithmetic guarantees odd `n >= -1`).
pub(crate) fn dfact_q(n: i64) -> Rational {
    Rational::from_integer(double_factorial(n).expect("odd index >= -1"))
}

/// Bernoulli number `B_m` from `sum_{j=0}^{m} C(m+1, j) B_j = 0`, `B_0 = 1`.
///
/// This convention gives `B_1 = -1/2`; only even indices enter the formulas.
pub fn bernoulli(m: usize) -> Rational {
    let mut table = bernoulli_table().lock().expect("bernoulli table poisoned");
    while table.len() <= m {
        let n = table.len();
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let c = fact(n + 1) / (fact(j) * fact(n + 1 - j));
            acc += Rational::from_integer(c) * b;
        }
        let next = -acc / rat(n as i64 + 1);
        table.push(next);
    }
    table[m].clone()
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `true` if `q > 0`.
pub fn is_positive(q: &Rational) -> bool {
    q.is_positive()
}
