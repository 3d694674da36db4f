//! Circulant determinants expanded exactly over Z[ζ_d].
//!
//! `det Circ(c_0, …, c_{d−1}) = ∏_j Σ_k ζ^{jk} c_k`, so the determinant is a
//! product of d linear forms whose coefficients are powers of ζ. Each factor
//! is applied with rotations only; the product has rational coefficients,
//! which is asserted at the end.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclotomic::CyclotomicInt;
use crate::error::{Error, Result};
use crate::polymat::SparsePoly;

/// Which symbolic circulant to expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CirculantSpec {
    /// `Circ(v_0, …, v_{d−1})` in d distinct variables.
    General { d: usize },
    /// `Circ(x, 0, …, y, …, z, …)` with y at position a and z at position b.
    Ternary { d: usize, a: usize, b: usize },
}

impl CirculantSpec {
    fn validate(&self) -> Result<()> {
        match *self {
            CirculantSpec::General { d } if d >= 1 => Ok(()),
            CirculantSpec::Ternary { d, a, b } if 1 <= a && a < b && b < d => Ok(()),
            _ => Err(Error::InvalidInput(format!("invalid circulant {self:?}: need 1 <= a < b <= d-1"))),
        }
    }

    pub fn d(&self) -> usize {
        match *self {
            CirculantSpec::General { d } | CirculantSpec::Ternary { d, .. } => d,
        }
    }

    fn nvars(&self) -> usize {
        match *self {
            CirculantSpec::General { d } => d,
            CirculantSpec::Ternary { .. } => 3,
        }
    }

    /// First row as (position, variable index) for nonzero slots.
    fn slots(&self) -> Vec<(usize, usize)> {
        match *self {
            CirculantSpec::General { d } => (0..d).map(|k| (k, k)).collect(),
            CirculantSpec::Ternary { a, b, .. } => vec![(0, 0), (a, 1), (b, 2)],
        }
    }
}

/// A linear form `Σ scale · ζ^shift · v_var`.
pub type RootForm = Vec<(usize, usize, BigInt)>;

/// Multiplies the given linear forms over Z[ζ_d] and converts the result to
/// an integer polynomial; a non-rational coefficient is a consistency error.
pub fn root_form_product(d: usize, nvars: usize, forms: impl IntoIterator<Item = RootForm>) -> Result<SparsePoly<BigInt>> {
    let mut p = SparsePoly::monomial(vec![0; nvars], CyclotomicInt::one(d));
    for f in forms {
        p = p.mul_root_linear_form(&f);
    }
    p.to_integer_poly().map_err(|_| {
        Error::Consistency(format!("product of {d}-th root linear forms has a non-rational coefficient"))
    })
}

/// Same product, kept over Z[ζ_d].
pub fn root_form_product_cyclotomic(
    d: usize,
    nvars: usize,
    forms: impl IntoIterator<Item = RootForm>,
) -> SparsePoly<CyclotomicInt> {
    let mut p = SparsePoly::monomial(vec![0; nvars], CyclotomicInt::one(d));
    for f in forms {
        p = p.mul_root_linear_form(&f);
    }
    p
}

/// The circulant determinant as the product of its eigenvalue forms.
pub fn circulant_det_symbolic(spec: CirculantSpec) -> Result<SparsePoly<BigInt>> {
    spec.validate()?;
    let d = spec.d();
    match spec {
        CirculantSpec::General { d } if d > 12 => {
            return Err(Error::Unsupported(format!("general circulant limited to d <= 12, got {d}")))
        }
        CirculantSpec::Ternary { d, .. } if d > 60 => {
            return Err(Error::Unsupported(format!("ternary circulant limited to d <= 60, got {d}")))
        }
        _ => {}
    }
    let slots = spec.slots();
    let forms = (0..d).map(|j| slots.iter().map(|&(k, var)| (var, j * k % d, BigInt::one())).collect());
    root_form_product(d, spec.nvars(), forms)
}

/// The same determinant by cofactor expansion along rows, memoized on the
/// set of columns already used.
pub fn circulant_det_oracle(spec: CirculantSpec) -> Result<SparsePoly<BigInt>> {
    spec.validate()?;
    let d = spec.d();
    if d > 6 {
        return Err(Error::Unsupported(format!("Laplace oracle limited to d <= 6, got {d}")));
    }
    let n = spec.nvars();
    let mut row0: Vec<Option<usize>> = vec![None; d];
    for (k, var) in spec.slots() {
        row0[k] = Some(var);
    }
    // entry (i, j) is the first-row entry at position (j − i) mod d
    let entry = |i: usize, j: usize| row0[(j + d - i) % d];
    fn expand(
        row: usize,
        used: u32,
        d: usize,
        n: usize,
        entry: &dyn Fn(usize, usize) -> Option<usize>,
        memo: &mut HashMap<u32, SparsePoly<BigInt>>,
    ) -> SparsePoly<BigInt> {
        if row == d {
            return SparsePoly::constant(n, 1);
        }
        if let Some(p) = memo.get(&used) {
            return p.clone();
        }
        let mut acc = SparsePoly::zero(n);
        let mut sign_pos = true;
        for col in 0..d {
            if used >> col & 1 == 1 {
                continue;
            }
            if let Some(var) = entry(row, col) {
                let minor = expand(row + 1, used | 1 << col, d, n, entry, memo);
                let mut term = SparsePoly::variable(n, var).try_mul(&minor).expect("same nvars");
                if !sign_pos {
                    term = term.negated();
                }
                acc = acc.try_add(&term).expect("same nvars");
            }
            sign_pos = !sign_pos;
        }
        memo.insert(used, acc.clone());
        acc
    }
    let mut memo = HashMap::new();
    Ok(expand(0, 0, d, n, &entry, &mut memo))
}

/// Exponent vector of `∏ v_{i}` over an index multiset.
pub fn index_exponent(d: usize, indices: &[usize]) -> Result<Vec<u32>> {
    if indices.len() != d {
        return Err(Error::InvalidInput(format!("expected {d} indices, got {}", indices.len())));
    }
    let mut e = vec![0u32; d];
    for &i in indices {
        if i >= d {
            return Err(Error::InvalidInput(format!("index {i} out of range 0..{d}")));
        }
        e[i] += 1;
    }
    Ok(e)
}

/// Coefficient `c_{i_1 … i_d}` of `v_{i_1} ⋯ v_{i_d}` in the general circulant.
pub fn general_coefficient(d: usize, indices: &[usize]) -> Result<BigInt> {
    let e = index_exponent(d, indices)?;
    let det = circulant_det_symbolic(CirculantSpec::General { d })?;
    Ok(det.coeff(&e).cloned().unwrap_or_else(BigInt::zero))
}

/// `det A_d^{a,b} = ∏_{j=0}^{d−1} (x + ζ^{aj} y + ζ^{bj} z)`.
pub fn ternary_product(d: usize, a: usize, b: usize) -> Result<SparsePoly<BigInt>> {
    circulant_det_symbolic(CirculantSpec::Ternary { d, a, b })
}

/// Coefficient `c_{m,n}` of `x^{d−m−n} y^m z^n` in `det A_d^{a,b}`.
pub fn ternary_coefficient(det: &SparsePoly<BigInt>, d: u32, m: u32, n: u32) -> BigInt {
    if m + n > d {
        return BigInt::zero();
    }
    det.coeff(&[d - m - n, m, n]).cloned().unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show3(p: &SparsePoly<BigInt>) -> String {
        p.display_with(&["v0", "v1", "v2"])
    }

    #[test]
    fn degree_three_general() {
        let p = circulant_det_symbolic(CirculantSpec::General { d: 3 }).unwrap();
        assert_eq!(show3(&p), "v0^3 - 3v0v1v2 + v1^3 + v2^3");
        assert_eq!(p, circulant_det_oracle(CirculantSpec::General { d: 3 }).unwrap());
        assert_eq!(general_coefficient(3, &[0, 0, 1]).unwrap(), BigInt::zero());
    }

    #[test]
    fn degree_two_oracle() {
        let p = circulant_det_oracle(CirculantSpec::General { d: 2 }).unwrap();
        assert_eq!(p.display_with(&["v0", "v1"]), "v0^2 - v1^2");
    }

    #[test]
    fn vanishing_coefficient_at_six() {
        assert_eq!(general_coefficient(6, &[0, 0, 1, 3, 3, 5]).unwrap(), BigInt::zero());
        // the sum 0+0+1+3+3+5 = 12 is 0 mod 6, so this is a genuine cancellation
        assert!(general_coefficient(6, &[0, 0, 0, 0, 3, 3]).unwrap() != BigInt::zero());
        assert!(general_coefficient(10, &[0, 0, 0, 0, 1, 21, 1, 3, 6, 8]).is_err());
    }

    #[test]
    fn four_by_four_agrees() {
        let s = CirculantSpec::General { d: 4 };
        let a = circulant_det_symbolic(s).unwrap();
        let b = circulant_det_oracle(s).unwrap();
        assert_eq!(a, b);
        let e = index_exponent(4, &[0, 0, 1, 3]).unwrap();
        assert_eq!(a.coeff(&e), b.coeff(&e));
    }

    #[test]
    fn ternary_basics() {
        let p = ternary_product(3, 1, 2).unwrap();
        assert_eq!(p.display_with(&["x", "y", "z"]), "x^3 - 3xyz + y^3 + z^3");
        for d in 3..12u32 {
            for b in 2..d {
                let p = ternary_product(d as usize, 1, b as usize).unwrap();
                assert_eq!(ternary_coefficient(&p, d, 0, 0), BigInt::one());
            }
        }
        let s = CirculantSpec::Ternary { d: 5, a: 1, b: 3 };
        assert_eq!(circulant_det_symbolic(s).unwrap(), circulant_det_oracle(s).unwrap());
        assert!(ternary_product(5, 3, 3).is_err());
    }
}
