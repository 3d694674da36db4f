//! Exact arithmetic in the ring of cyclotomic integers `Z[ζ_d]`.
//!
//! Elements are stored in the redundant power basis `1, ζ, …, ζ^{d-1}`, i.e.
//! as residues modulo `x^d - 1`. Ring operations never reduce further; zero
//! tests, equality and integrality checks reduce modulo the cyclotomic
//! polynomial `Φ_d`, which is computed once per order and cached.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::json;

/// The cyclotomic polynomial `Φ_d` with coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloPolynomial {
    d: usize,
    coeffs: Vec<BigInt>,
}

impl CycloPolynomial {
    pub fn order(&self) -> usize {
        self.d
    }

    /// Coefficients, constant term first. The last entry is always 1.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

impl fmt::Display for CycloPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_univariate(f, &self.coeffs, "x")
    }
}

fn phi_cache() -> &'static RwLock<HashMap<usize, Arc<CycloPolynomial>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<CycloPolynomial>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Returns `Φ_d`, computed by exact division of `x^d - 1` by `Φ_e` for every
/// proper divisor `e` of `d`.
///
/// # Panics
/// Panics if `d == 0`.
pub fn cyclotomic_polynomial(d: usize) -> Arc<CycloPolynomial> {
    assert!(d >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = phi_cache().read().expect("phi cache poisoned").get(&d) {
        return Arc::clone(p);
    }
    let mut num = vec![BigInt::zero(); d + 1];
    num[0] = -BigInt::one();
    num[d] = BigInt::one();
    for e in 1..d {
        if d % e == 0 {
            let phi_e = cyclotomic_polynomial(e);
            let (q, r) = div_rem_monic(&num, &phi_e.coeffs);
            debug_assert!(r.iter().all(Zero::is_zero));
            num = q;
        }
    }
    let computed = Arc::new(CycloPolynomial { d, coeffs: num });
    let mut cache = phi_cache().write().expect("phi cache poisoned");
    Arc::clone(cache.entry(d).or_insert(computed))
}

/// Euclidean division of `a` by a monic polynomial `m` (ascending coefficients).
pub(crate) fn div_rem_monic(a: &[BigInt], m: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let n = m.len() - 1;
    debug_assert!(m[n].is_one());
    let mut rem = a.to_vec();
    if rem.len() <= n {
        rem.resize(n, BigInt::zero());
        return (vec![], rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - n];
    for i in (n..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut rem[i]);
        for j in 0..n {
            if !m[j].is_zero() {
                rem[i - n + j] -= &c * &m[j];
            }
        }
        quot[i - n] = c;
    }
    rem.truncate(n);
    while quot.last().is_some_and(Zero::is_zero) {
        quot.pop();
    }
    (quot, rem)
}

/// Remainder of an arbitrary integer polynomial modulo `Φ_d`, padded to `φ(d)` entries.
pub fn reduce_poly_mod_phi(d: usize, coeffs: &[BigInt]) -> Vec<BigInt> {
    let phi = cyclotomic_polynomial(d);
    div_rem_monic(coeffs, &phi.coeffs).1
}

/// An element of `Z[ζ_d]`.
#[derive(Debug, Clone)]
pub struct CyclotomicInt {
    order: usize,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInt {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "root of unity of order 0");
        Self { order, coeffs: vec![BigInt::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        Self::from_integer(order, BigInt::one())
    }

    pub fn from_integer(order: usize, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = n.into();
        z
    }

    /// `ζ^k`, with `k` taken modulo the order.
    pub fn root_power(order: usize, k: i64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[k.rem_euclid(order as i64) as usize] = BigInt::one();
        z
    }

    /// Builds `Σ coeffs[i] ζ^i`. Coefficient lists longer than the order are
    /// folded using `ζ^d = 1`.
    pub fn from_coeffs(order: usize, coeffs: Vec<BigInt>) -> Self {
        let mut z = Self::zero(order);
        for (i, c) in coeffs.into_iter().enumerate() {
            z.coeffs[i % order] += c;
        }
        z
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Raw coefficients in the redundant power basis (not reduced).
    pub fn raw_coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.order, other.order))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if let Some((k, c)) = other.as_monomial() {
            return Ok(self.rotate(k).scale(c));
        }
        if let Some((k, c)) = self.as_monomial() {
            return Ok(other.rotate(k).scale(c));
        }
        let d = self.order;
        let mut out = Self::zero(d);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[(i + j) % d] += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Multiplication by `ζ^k`: a cyclic shift of the coefficients.
    pub fn rotate(&self, k: usize) -> Self {
        let d = self.order;
        let k = k % d;
        let mut coeffs = vec![BigInt::zero(); d];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(i + k) % d] = c.clone();
        }
        Self { order: d, coeffs }
    }

    /// `self += ζ^shift · other`.
    pub fn add_rotated(&mut self, other: &Self, shift: usize) {
        debug_assert_eq!(self.order, other.order);
        let d = self.order;
        for (i, c) in other.coeffs.iter().enumerate() {
            if !c.is_zero() {
                self.coeffs[(i + shift) % d] += c;
            }
        }
    }

    /// `self += factor · ζ^shift · other`.
    pub fn add_rotated_scaled(&mut self, other: &Self, shift: usize, factor: &BigInt) {
        debug_assert_eq!(self.order, other.order);
        let d = self.order;
        for (i, c) in other.coeffs.iter().enumerate() {
            if !c.is_zero() {
                self.coeffs[(i + shift) % d] += c * factor;
            }
        }
    }

    /// `Some((k, c))` when the element is `c·ζ^k` in the power basis.
    fn as_monomial(&self) -> Option<(usize, &BigInt)> {
        let mut found = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some((i, c));
            }
        }
        found
    }

    /// Remainder modulo `Φ_d`, `φ(d)` coefficients.
    pub fn reduced_coeffs(&self) -> Vec<BigInt> {
        reduce_poly_mod_phi(self.order, &self.coeffs)
    }

    /// Canonical representative: reduced modulo `Φ_d`, padded with zeros to length `d`.
    pub fn canonical(&self) -> Self {
        let mut coeffs = self.reduced_coeffs();
        coeffs.resize(self.order, BigInt::zero());
        Self { order: self.order, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        // cheap exit before dividing
        if self.coeffs.iter().all(Zero::is_zero) {
            return true;
        }
        self.reduced_coeffs().iter().all(Zero::is_zero)
    }

    /// The rational-integer value, if the reduced form is constant.
    pub fn as_integer(&self) -> Result<BigInt> {
        let r = self.reduced_coeffs();
        if r[1..].iter().all(Zero::is_zero) {
            Ok(r[0].clone())
        } else {
            Err(Error::NonInteger)
        }
    }

    /// Galois substitution `ζ ↦ ζ^k` (k taken modulo the order), reduced canonically.
    pub fn substitute_power(&self, k: i64) -> Self {
        let d = self.order;
        let k = k.rem_euclid(d as i64) as usize;
        let mut coeffs = vec![BigInt::zero(); d];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(i * k) % d] += c;
        }
        Self { order: d, coeffs }.canonical()
    }
}

impl PartialEq for CyclotomicInt {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.try_sub(other).map(|z| z.is_zero()).unwrap_or(false)
    }
}

impl Eq for CyclotomicInt {}

macro_rules! checked_op {
    ($trait:ident, $method:ident, $call:ident) => {
        impl $trait for &CyclotomicInt {
            type Output = CyclotomicInt;
            /// # Panics
            /// Panics when the two orders differ; use the `try_` method to get an error instead.
            fn $method(self, rhs: &CyclotomicInt) -> CyclotomicInt {
                self.$call(rhs).expect("cyclotomic order mismatch")
            }
        }
        impl $trait for CyclotomicInt {
            type Output = CyclotomicInt;
            fn $method(self, rhs: CyclotomicInt) -> CyclotomicInt {
                (&self).$method(&rhs)
            }
        }
    };
}

checked_op!(Add, add, try_add);
checked_op!(Sub, sub, try_sub);
checked_op!(Mul, mul, try_mul);

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        CyclotomicInt { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CyclotomicInt {
    type Output = CyclotomicInt;
    fn neg(self) -> CyclotomicInt {
        -&self
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_univariate(f, &self.canonical().coeffs, "ζ")
    }
}

impl Serialize for CyclotomicInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let canon = self.canonical();
        let coeffs: Vec<serde_json::Value> = canon.coeffs.iter().map(json::bigint).collect();
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("d", &self.order)?;
        map.serialize_entry("coeffs", &coeffs)?;
        map.end()
    }
}

fn write_univariate(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt], var: &str) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        first = false;
        match i {
            0 => write!(f, "{mag}")?,
            _ => {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                write!(f, "{var}")?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::euler_phi;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1).coeffs(), ints(&[-1, 1]).as_slice());
        assert_eq!(cyclotomic_polynomial(6).coeffs(), ints(&[1, -1, 1]).as_slice());
        assert_eq!(cyclotomic_polynomial(12).coeffs(), ints(&[1, 0, -1, 0, 1]).as_slice());
        assert_eq!(cyclotomic_polynomial(6).to_string(), "x^2 - x + 1");
    }

    #[test]
    fn product_of_cyclotomics_is_x_d_minus_one() {
        for d in 1..=30usize {
            let mut prod = ints(&[1]);
            for e in (1..=d).filter(|e| d % e == 0) {
                prod = poly_mul(&prod, cyclotomic_polynomial(e).coeffs());
            }
            let mut expect = vec![BigInt::zero(); d + 1];
            expect[0] = BigInt::from(-1);
            expect[d] = BigInt::one();
            assert_eq!(prod, expect, "d = {d}");
            assert_eq!(cyclotomic_polynomial(d).degree() as u64, euler_phi(d as u64));
        }
    }

    #[test]
    fn ring_examples() {
        let z3 = |k| CyclotomicInt::root_power(3, k);
        let sum = &(&CyclotomicInt::one(3) + &z3(1)) + &z3(2);
        assert!(sum.is_zero());

        let p = &CyclotomicInt::root_power(4, 1) * &CyclotomicInt::root_power(4, 3);
        assert_eq!(p, CyclotomicInt::one(4));

        let all5 = (0..5).fold(CyclotomicInt::zero(5), |acc, k| &acc + &CyclotomicInt::root_power(5, k));
        assert!(all5.is_zero());
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = CyclotomicInt::one(3);
        let b = CyclotomicInt::one(4);
        assert_eq!(a.try_mul(&b), Err(Error::OrderMismatch(3, 4)));
        assert!(a.try_add(&b).is_err());
    }

    #[test]
    fn canonical_reduction() {
        let z = CyclotomicInt::root_power(6, 2);
        let canon = z.canonical();
        assert_eq!(canon.raw_coeffs(), ints(&[-1, 1, 0, 0, 0, 0]).as_slice());
        assert_eq!(CyclotomicInt::from_integer(2, 3).as_integer(), Ok(BigInt::from(3)));
        assert_eq!(CyclotomicInt::root_power(5, 1).as_integer(), Err(Error::NonInteger));
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(CyclotomicInt::root_power(5, 1).substitute_power(2), CyclotomicInt::root_power(5, 2));
        assert_eq!(CyclotomicInt::root_power(7, 3).substitute_power(5), CyclotomicInt::root_power(7, 1));
        let u = CyclotomicInt::from_coeffs(9, ints(&[3, -1, 4, 1, -5, 9, 2, -6, 5]));
        assert_eq!(u.substitute_power(1), u);
    }

    #[test]
    fn serialization_is_canonical_and_padded() {
        let z = CyclotomicInt::root_power(6, 2);
        let v = serde_json::to_value(&z).unwrap();
        assert_eq!(v, serde_json::json!({"d": 6, "coeffs": [-1, 1, 0, 0, 0, 0]}));
    }

    #[test]
    fn display() {
        let z = CyclotomicInt::from_coeffs(5, ints(&[2, 0, -1]));
        assert_eq!(z.to_string(), "-ζ^2 + 2");
        assert_eq!(CyclotomicInt::zero(5).to_string(), "0");
    }
}
