//! Dense polynomials in `q` with nonnegative big-integer coefficients.

use std::fmt;
use std::ops::Mul;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// `Σ coeffs[k] q^k`, trailing zeros trimmed; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPolynomial {
    coeffs: Vec<BigUint>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPolynomial { coeffs: vec![BigUint::one()] }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn from_u64s(coeffs: &[u64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// `Σ_d q^d` over a multiset of degrees.
    pub fn from_degrees<I: IntoIterator<Item = u64>>(degrees: I) -> Self {
        let mut counts: Vec<u64> = Vec::new();
        for d in degrees {
            let d = d as usize;
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        Self::from_u64s(&counts)
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> BigUint {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn eval_at_one(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// The coefficients as `u64`, if they all fit.
    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.coeffs.iter().map(ToPrimitive::to_u64).collect()
    }

    /// Exact quotient by `[m]_q`, provided it exists and has nonnegative coefficients.
    pub fn div_q_integer(&self, m: u64) -> Option<QPolynomial> {
        assert!(m >= 1);
        let deg = self.degree()?;
        let m = m as usize;
        if m == 1 {
            return Some(self.clone());
        }
        if deg + 1 < m {
            return None;
        }
        // Q_k = P_k - (Q_{k-1} + … + Q_{k-m+1}); every Q_k past deg - m + 1 must vanish.
        let qdeg = deg + 1 - m;
        let mut q: Vec<BigInt> = Vec::with_capacity(deg + 1);
        let mut window = BigInt::zero();
        for k in 0..=deg {
            let qk = BigInt::from(self.coeffs[k].clone()) - &window;
            if k > qdeg && !qk.is_zero() {
                return None;
            }
            window += &qk;
            if k + 1 >= m {
                window -= &q[k + 1 - m];
            }
            q.push(qk);
        }
        q.truncate(qdeg + 1);
        let mut out = Vec::with_capacity(q.len());
        for c in q {
            match c.sign() {
                Sign::Minus => return None,
                _ => out.push(c.magnitude().clone()),
            }
        }
        Some(QPolynomial::from_coeffs(out))
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;

    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut out = vec![BigUint::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPolynomial::from_coeffs(out)
    }
}

impl Mul for QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: QPolynomial) -> QPolynomial {
        &self * &rhs
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{c}q")?,
                (_, true) => write!(f, "q^{k}")?,
                (_, false) => write!(f, "{c}q^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPolynomial({self})")
    }
}

/// Coefficient array, low degree first. Coefficients beyond `u64` are emitted as decimal strings.
impl Serialize for QPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            match c.to_u64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

/// `[m]_q = 1 + q + … + q^{m-1}`.
pub fn q_integer(m: u64) -> QPolynomial {
    assert!(m >= 1, "q-integers are defined for m >= 1");
    QPolynomial { coeffs: vec![BigUint::one(); m as usize] }
}

/// `Π [m_i]_q`.
pub fn q_product(ms: &[u64]) -> QPolynomial {
    ms.iter().fold(QPolynomial::one(), |acc, &m| &acc * &q_integer(m))
}

/// Writes `poly` as a product of q-integers `[m]_q` with `m >= 2`, returned in
/// ascending order, or `None` if no such product exists.
///
/// Factors are stripped largest first. If `poly = Π [m_i]_q`, the largest `m`
/// with `[m]_q | poly` is `max m_i`: `[m]_q` divides only if the cyclotomic
/// factor `Φ_m` divides some `[m_i]_q`, i.e. `m | m_i`. Smallest-first would
/// go wrong on `[4]_q = [2]_q (1 + q^2)`.
pub fn q_integer_factorization(poly: &QPolynomial) -> Option<Vec<u64>> {
    if poly.is_zero() || !poly.coefficient(0).is_one() {
        return None;
    }
    let mut rest = poly.clone();
    let mut factors = Vec::new();
    while !rest.is_one() {
        let deg = rest.degree()? as u64;
        let (m, quotient) = (2..=deg + 1).rev().find_map(|m| rest.div_q_integer(m).map(|q| (m, q)))?;
        factors.push(m);
        rest = quotient;
    }
    factors.sort_unstable();
    Some(factors)
}
