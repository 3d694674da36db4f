//! Diagonal cyclic actions `M_{a,b,c} = diag(ζ^a, ζ^b, ζ^c)` on degree-d
//! ternary forms, their invariant monomials, and the modular helpers used
//! by the classification.

use std::fmt;

use serde::ser::{Serialize, SerializeStruct, Serializer};
use serde_json::{json, Value};

use crate::arith::{gcd, gcd_all, mod_inverse};
use crate::error::{Error, Result};

/// A diagonal representation of Z/dZ by weights mod d.
///
/// `weights` are the weights actually used for invariance; `original` is the
/// triple as supplied by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Action {
    d: usize,
    original: [usize; 3],
    weights: [usize; 3],
}

impl Action {
    /// Builds an action with the weights taken as given (reduced mod d),
    /// without reordering.
    pub fn new(d: usize, weights: [i64; 3]) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidAction(format!("d must be at least 3, got {d}")));
        }
        let w = weights.map(|x| x.rem_euclid(d as i64) as usize);
        let g = gcd_all(&[w[0] as u64, w[1] as u64, w[2] as u64, d as u64]);
        if g != 1 {
            return Err(Error::InvalidAction(format!(
                "gcd of weights ({},{},{}) and d={d} is {g}; the group is not cyclic of order d",
                weights[0], weights[1], weights[2]
            )));
        }
        Ok(Self { d, original: w, weights: w })
    }

    /// The family `M_a = diag(1, ζ, ζ^a)`.
    pub fn m_a(d: usize, a: usize) -> Result<Self> {
        if !(2..d).contains(&a) {
            return Err(Error::InvalidInput(format!("a must lie in 2..={}, got {a}", d.saturating_sub(1))));
        }
        Self::new(d, [0, 1, a as i64])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn weights(&self) -> [usize; 3] {
        self.weights
    }

    pub fn original(&self) -> [usize; 3] {
        self.original
    }

    pub fn is_invariant(&self, m: &Monomial) -> bool {
        let [a, b, c] = self.weights;
        let s = a * m.0[0] as usize + b * m.0[1] as usize + c * m.0[2] as usize;
        s % self.d == 0
    }

    /// Weights are pairwise distinct mod d.
    pub fn has_distinct_weights(&self) -> bool {
        let [a, b, c] = self.weights;
        a != b && b != c && a != c
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.weights;
        write!(f, "M_{{{a},{b},{c}}} (d={})", self.d)
    }
}

impl Serialize for Action {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Action", 3)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("weights", &self.weights)?;
        st.serialize_field("original", &self.original)?;
        st.end()
    }
}

/// Canonical representative: subtract the first weight, then sort.
///
/// Validity is checked on the supplied triple. The normalized weights may
/// share a factor with d (e.g. (1,3,3) at d=4 becomes (0,2,2)); that is the
/// same action, so it is kept.
pub fn normalize_action(d: usize, a: i64, b: i64, c: i64) -> Result<Action> {
    if d < 3 {
        return Err(Error::InvalidAction(format!("d must be at least 3, got {d}")));
    }
    let g = gcd_all(&[a.unsigned_abs(), b.unsigned_abs(), c.unsigned_abs(), d as u64]);
    if g != 1 {
        return Err(Error::InvalidAction(format!(
            "gcd({a},{b},{c},{d}) = {g}; the group is not cyclic of order d"
        )));
    }
    let di = d as i64;
    let orig = [a, b, c].map(|x| x.rem_euclid(di) as usize);
    let mut w = [0, (b - a).rem_euclid(di) as usize, (c - a).rem_euclid(di) as usize];
    w.sort_unstable();
    Ok(Action { d, original: orig, weights: w })
}

/// Exponent triple of a ternary monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_pure_power(&self) -> bool {
        self.0.iter().filter(|&&e| e > 0).count() == 1
    }

    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|&&e| e > 0).count()
    }

    /// Coordinate `i` of the result is coordinate `perm[i]` of `self`.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        Monomial(perm.map(|i| self.0[i]))
    }

    pub fn to_json(&self) -> Value {
        json!({"exp": self.0, "display": self.to_string()})
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::polymat::monomial_string(&self.0, &["x", "y", "z"]))
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// All six permutations of three coordinates.
pub const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// A set of degree-d monomials, sorted descending lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    d: u32,
    generators: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(d: u32, mut generators: Vec<Monomial>) -> Result<Self> {
        if let Some(m) = generators.iter().find(|m| m.degree() != d) {
            return Err(Error::InvalidInput(format!("generator {m} does not have degree {d}")));
        }
        generators.sort_unstable_by(|a, b| b.cmp(a));
        generators.dedup();
        Ok(Self { d, generators })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn mu(&self) -> usize {
        self.generators.len()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.generators.binary_search_by(|g| m.cmp(g)).is_ok()
    }

    /// Contains x^d, y^d and z^d; for three variables and generators of a
    /// single degree this is finite colength.
    pub fn is_artinian(&self) -> bool {
        (0..3).all(|i| {
            let mut e = [0; 3];
            e[i] = self.d;
            self.contains(&Monomial(e))
        })
    }

    pub fn without(&self, index: usize) -> Self {
        let mut g = self.generators.clone();
        g.remove(index);
        Self { d: self.d, generators: g }
    }

    /// Image under a coordinate permutation.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        Self::new(self.d, self.generators.iter().map(|m| m.permuted(perm)).collect())
            .expect("permutation preserves degree")
    }

    /// The smallest image of the generator list over all coordinate
    /// permutations; two ideals agree up to renaming variables iff their
    /// canonical forms are equal.
    pub fn canonical_form(&self) -> Vec<Monomial> {
        PERMUTATIONS
            .iter()
            .map(|&p| self.permuted(p).generators)
            .min()
            .expect("six permutations")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "mu": self.mu(),
            "generators": self.generators.iter().map(Monomial::to_json).collect::<Vec<_>>(),
        })
    }
}

/// The invariant ideal of an action together with the action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GTIdeal {
    pub action: Action,
    pub ideal: MonomialIdeal,
}

impl GTIdeal {
    pub fn mu(&self) -> usize {
        self.ideal.mu()
    }

    pub fn generators(&self) -> &[Monomial] {
        self.ideal.generators()
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.ideal.to_json();
        v["action"] = serde_json::to_value(&self.action).expect("action");
        v
    }
}

/// Every degree-d monomial fixed by the action, by direct scan.
pub fn invariant_monomials(action: &Action) -> GTIdeal {
    let d = action.d as u32;
    let mut gens = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            let m = Monomial([a, b, d - a - b]);
            if action.is_invariant(&m) {
                gens.push(m);
            }
        }
    }
    GTIdeal { action: action.clone(), ideal: MonomialIdeal { d, generators: gens } }
}

/// `I_a`: the invariant ideal of `M_a = diag(1, ζ, ζ^a)`.
pub fn ideal_m_a(d: usize, a: usize) -> Result<GTIdeal> {
    Ok(invariant_monomials(&Action::m_a(d, a)?))
}

/// The minimal b > 0 with bα ≡ 1 (mod d) and the k with bα − kd = 1.
pub fn inverse_data(d: usize, alpha: usize) -> Result<(usize, usize)> {
    if !(2..d).contains(&alpha) {
        return Err(Error::InvalidInput(format!("alpha must lie in 2..={}, got {alpha}", d - 1)));
    }
    let b = mod_inverse(alpha as u64, d as u64)? as usize;
    let k = (b * alpha - 1) / d;
    Ok((b, k))
}

/// `n_m = n_1·m mod d` for m = 1..d−1, where `a·n_1 ≡ −1 (mod d)` minimally.
pub fn n_sequence(d: usize, a: usize) -> Result<Vec<usize>> {
    if gcd(a as u64, d as u64) != 1 {
        return Err(Error::NotInvertible { value: a as i64, modulus: d as u64 });
    }
    let inv = mod_inverse(a as u64 % d as u64, d as u64)? as usize;
    let n1 = (d - inv) % d;
    Ok((1..d).map(|m| n1 * m % d).collect())
}

/// `(x^d, y^d, z^d, x^k y^k z^ε, …, x y z^{d−2})` in the displayed order.
pub fn generalized_classical_ordered(d: u32) -> Vec<Monomial> {
    let k = d / 2;
    let eps = d % 2;
    let mut v = vec![Monomial([d, 0, 0]), Monomial([0, d, 0]), Monomial([0, 0, d])];
    v.extend((0..k).map(|i| Monomial([k - i, k - i, eps + 2 * i])));
    v
}

pub fn generalized_classical(d: u32) -> Result<MonomialIdeal> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("d must be at least 3, got {d}")));
    }
    MonomialIdeal::new(d, generalized_classical_ordered(d))
}
