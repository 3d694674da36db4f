use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::cyclotomic::CyclotomicInt;
use crate::error::{Error, Result};
use crate::json;

/// Exponent vector of a monomial; its length is the number of variables.
pub type Exponent = Vec<u32>;

/// Coefficient ring of a [`SparsePoly`].
pub trait Scalar: Clone + fmt::Debug + PartialEq {
    fn is_zero_scalar(&self) -> bool;
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn try_mul(&self, other: &Self) -> Result<Self>;
    fn negated(&self) -> Self;
    fn to_json(&self) -> Value;
}

impl Scalar for BigInt {
    fn is_zero_scalar(&self) -> bool {
        self.is_zero()
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn negated(&self) -> Self {
        -self
    }
    fn to_json(&self) -> Value {
        json::bigint(self)
    }
}

impl Scalar for CyclotomicInt {
    fn is_zero_scalar(&self) -> bool {
        self.is_zero()
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        CyclotomicInt::try_add(self, other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        CyclotomicInt::try_mul(self, other)
    }
    fn negated(&self) -> Self {
        -self
    }
    fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("cyclotomic serialization")
    }
}

/// A sparse polynomial: exponent vector → nonzero coefficient.
///
/// Terms iterate in descending lexicographic order of exponent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePoly<C: Scalar> {
    nvars: usize,
    terms: BTreeMap<Exponent, C>,
}

impl<C: Scalar> SparsePoly<C> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(exp: Exponent, coeff: C) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, coeff).expect("fresh polynomial");
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, C)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c)?;
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff · x^exp`, deleting the term if it cancels.
    pub fn add_term(&mut self, exp: Exponent, coeff: C) -> Result<()> {
        if exp.len() != self.nvars {
            return Err(Error::NvarsMismatch(self.nvars, exp.len()));
        }
        if coeff.is_zero_scalar() {
            return Ok(());
        }
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().try_add(&coeff)?;
                if sum.is_zero_scalar() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn coeff(&self, exp: &[u32]) -> Option<&C> {
        self.terms.get(exp)
    }

    /// Terms in canonical (descending lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter().rev()
    }

    pub fn support(&self) -> BTreeSet<Exponent> {
        self.terms.keys().cloned().collect()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::NvarsMismatch(self.nvars, other.nvars))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.negated())
    }

    pub fn negated(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.negated())).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.try_mul(c2)?)?;
            }
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> Result<D>) -> Result<SparsePoly<D>> {
        let mut out = SparsePoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c)?)?;
        }
        Ok(out)
    }

    /// `[{"exp": [...], "coeff": ...}, ...]` in canonical term order.
    pub fn to_json(&self) -> Value {
        Value::Array(self.terms().map(|(e, c)| json!({"exp": e, "coeff": c.to_json()})).collect())
    }
}

impl SparsePoly<BigInt> {
    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::monomial(e, BigInt::one())
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; nvars], c.into())
    }

    /// Renders with the given variable names, e.g. `x^3 - 3xyz + y^3 + z^3`.
    pub fn display_with(&self, vars: &[&str]) -> String {
        let mut out = String::new();
        for (i, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            let mono = monomial_string(e, vars);
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                }
                out.push_str(&mono);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl SparsePoly<CyclotomicInt> {
    /// Multiplies by the linear form `Σ scale_k · ζ^{shift_k} · v_{var_k}`.
    ///
    /// Coefficients are only rotated and added, never multiplied as
    /// cyclotomic elements; terms that become zero in the power basis are pruned.
    pub fn mul_root_linear_form(&self, form: &[(usize, usize, BigInt)]) -> Self {
        let order = match self.terms.values().next() {
            Some(c) => c.order(),
            None => return self.clone(),
        };
        let mut out: BTreeMap<Exponent, CyclotomicInt> = BTreeMap::new();
        for (e, c) in &self.terms {
            for (var, shift, scale) in form {
                let mut e2 = e.clone();
                e2[*var] += 1;
                let slot = out.entry(e2).or_insert_with(|| CyclotomicInt::zero(order));
                if scale.is_one() {
                    slot.add_rotated(c, *shift);
                } else {
                    slot.add_rotated_scaled(c, *shift, scale);
                }
            }
        }
        out.retain(|_, c| c.raw_coeffs().iter().any(|x| !x.is_zero()));
        Self { nvars: self.nvars, terms: out }
    }

    /// Converts every coefficient to a rational integer; any coefficient
    /// whose reduced form is non-constant is an error.
    pub fn to_integer_poly(&self) -> Result<SparsePoly<BigInt>> {
        self.map_coeffs(|c| c.as_integer())
    }
}

/// `x^4yz^2`-style rendering; exponent 1 omitted, zero exponents dropped.
pub fn monomial_string(exp: &[u32], vars: &[&str]) -> String {
    let mut s = String::new();
    for (i, &k) in exp.iter().enumerate() {
        match k {
            0 => {}
            1 => s.push_str(vars[i]),
            _ => {
                s.push_str(vars[i]);
                s.push('^');
                s.push_str(&k.to_string());
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> [SparsePoly<BigInt>; 3] {
        [0, 1, 2].map(|i| SparsePoly::variable(3, i))
    }

    #[test]
    fn difference_of_squares() {
        let x = SparsePoly::variable(2, 0);
        let y = SparsePoly::variable(2, 1);
        let p = x.try_add(&y).unwrap().try_mul(&x.try_sub(&y).unwrap()).unwrap();
        assert_eq!(p.display_with(&["x", "y"]), "x^2 - y^2");
        assert!(p.try_mul(&SparsePoly::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn classical_cubic_certificate() {
        let [x, y, z] = xyz();
        let l = x.try_add(&y).unwrap().try_add(&z).unwrap();
        let mut c = SparsePoly::zero(3);
        for (e, k) in [
            (vec![2, 0, 0], 1),
            (vec![0, 2, 0], 1),
            (vec![0, 0, 2], 1),
            (vec![1, 1, 0], -1),
            (vec![0, 1, 1], -1),
            (vec![1, 0, 1], -1),
        ] {
            c.add_term(e, BigInt::from(k)).unwrap();
        }
        let f = l.try_mul(&c).unwrap();
        assert_eq!(f.display_with(&["x", "y", "z"]), "x^3 - 3xyz + y^3 + z^3");
    }

    #[test]
    fn nvars_mismatch() {
        let a = SparsePoly::variable(2, 0);
        let b = SparsePoly::variable(3, 0);
        assert_eq!(a.try_mul(&b), Err(Error::NvarsMismatch(2, 3)));
        let mut c = SparsePoly::<BigInt>::zero(2);
        assert!(c.add_term(vec![1, 2, 3], BigInt::one()).is_err());
    }

    #[test]
    fn json_order_is_descending_lex() {
        let [x, y, _] = xyz();
        let p = x.try_add(&y).unwrap().try_mul(&x.try_add(&y).unwrap()).unwrap();
        let v = p.to_json();
        assert_eq!(
            v,
            json!([
                {"exp": [2, 0, 0], "coeff": 1},
                {"exp": [1, 1, 0], "coeff": 2},
                {"exp": [0, 2, 0], "coeff": 1}
            ])
        );
    }

    #[test]
    fn root_linear_form_matches_generic_product() {
        let d = 5;
        let mut p = SparsePoly::monomial(vec![0, 0], CyclotomicInt::one(d));
        let mut q = p.clone();
        for j in 0..d {
            p = p.mul_root_linear_form(&[(0, 0, BigInt::one()), (1, j, BigInt::from(2))]);
            let form = SparsePoly::from_terms(
                2,
                [
                    (vec![1, 0], CyclotomicInt::one(d)),
                    (vec![0, 1], CyclotomicInt::root_power(d, j as i64).scale(&BigInt::from(2))),
                ],
            )
            .unwrap();
            q = q.try_mul(&form).unwrap();
        }
        // ∏ (x + 2ζ^j y) = x^5 + 32 y^5
        let pi = p.to_integer_poly().unwrap();
        assert_eq!(pi, q.to_integer_poly().unwrap());
        assert_eq!(pi.display_with(&["x", "y"]), "x^5 + 32y^5");
    }
}
