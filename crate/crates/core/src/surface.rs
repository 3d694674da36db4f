//! Toric invariants of the image surface of a monomial system: degree from
//! the exponent polygon, the vertex smoothness test, the determinantal
//! equations of S_d for the generalized classical systems, and their Betti
//! tables.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::actions::{generalized_classical_ordered, Monomial, MonomialIdeal};
use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::polymat::SparsePoly;
use crate::wlp::monomials_of_degree;

type Pt = (i64, i64);

fn gcd_i(a: i64, b: i64) -> i64 {
    crate::arith::gcd(a.unsigned_abs(), b.unsigned_abs()) as i64
}

fn cross(o: Pt, a: Pt, b: Pt) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Counter-clockwise hull without collinear points.
fn convex_hull(points: &[Pt]) -> Vec<Pt> {
    let mut p: Vec<Pt> = points.to_vec();
    p.sort_unstable();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut hull: Vec<Pt> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Pt>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    hull
}

/// Rank-2 sublattice of Z² in Hermite form: rows (a, b) and (0, c), a, c > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Lattice {
    a: i64,
    b: i64,
    c: i64,
}

impl Lattice {
    fn generated_by(vectors: &[Pt]) -> Option<Self> {
        // first column: gcd over x-coordinates via extended Euclid on rows
        let mut rows: Vec<Pt> = vectors.iter().copied().filter(|&v| v != (0, 0)).collect();
        let mut pivot: Option<Pt> = None;
        let mut rest: Vec<Pt> = Vec::new();
        for v in rows.drain(..) {
            if v.0 == 0 {
                rest.push(v);
                continue;
            }
            let Some(mut p) = pivot else {
                pivot = Some(v);
                continue;
            };
            let mut q = v;
            while q.0 != 0 {
                let t = p.0 / q.0;
                p = (p.0 - t * q.0, p.1 - t * q.1);
                std::mem::swap(&mut p, &mut q);
            }
            rest.push(q);
            pivot = Some(p);
        }
        let mut p = pivot?;
        if p.0 < 0 {
            p = (-p.0, -p.1);
        }
        let c = rest.iter().fold(0, |g, v| gcd_i(g, v.1));
        if c == 0 {
            return None;
        }
        Some(Self { a: p.0, b: p.1.rem_euclid(c), c })
    }

    fn index(&self) -> i64 {
        self.a * self.c
    }

    fn contains(&self, v: Pt) -> bool {
        if v.0 % self.a != 0 {
            return false;
        }
        let k = v.0 / self.a;
        (v.1 - k * self.b) % self.c == 0
    }

    /// `e / t` for the largest t making it a lattice vector.
    fn primitive(&self, e: Pt) -> Pt {
        let g = gcd_i(e.0, e.1);
        (1..=g)
            .rev()
            .filter(|t| g % t == 0)
            .map(|t| (e.0 / t, e.1 / t))
            .find(|&u| self.contains(u))
            .unwrap_or(e)
    }
}

fn project(m: &Monomial) -> Pt {
    (m.0[1] as i64, m.0[2] as i64)
}

/// Exponent polygon of a point set and the degree it gives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeModel {
    pub points: Vec<Pt>,
    pub hull: Vec<Pt>,
    pub normalized_area: i64,
    pub lattice_index: i64,
    pub surface_degree: i64,
}

fn lattice_of(points: &[Pt]) -> Result<(Vec<Pt>, Lattice, i64)> {
    let hull = convex_hull(points);
    if hull.len() < 3 {
        return Err(Error::Degenerate("exponent points are collinear".into()));
    }
    let area2: i64 = (0..hull.len()).map(|i| cross((0, 0), hull[i], hull[(i + 1) % hull.len()])).sum();
    let base = points[0];
    let diffs: Vec<Pt> = points.iter().map(|p| (p.0 - base.0, p.1 - base.1)).collect();
    let lattice = Lattice::generated_by(&diffs).ok_or_else(|| Error::Degenerate("difference lattice has rank < 2".into()))?;
    Ok((hull, lattice, area2))
}

/// Degree of the image of `φ_I` as normalized area over lattice index.
pub fn exponent_polytope_degree(ideal: &MonomialIdeal) -> Result<LatticeModel> {
    let points: Vec<Pt> = ideal.generators().iter().map(project).collect();
    let (hull, lattice, area) = lattice_of(&points)?;
    let index = lattice.index();
    if area % index != 0 {
        return Err(Error::Consistency(format!("area {area} is not divisible by lattice index {index}")));
    }
    Ok(LatticeModel { points, hull, normalized_area: area, lattice_index: index, surface_degree: area / index })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexCheck {
    pub vertex: Pt,
    pub edge_vectors: [Pt; 2],
    pub det: i64,
    pub neighbours_present: bool,
    pub smooth: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub smooth: bool,
    /// The point set tested: the degree-d monomials outside I.
    pub point_set: &'static str,
    pub lattice_index: i64,
    pub vertices: Vec<VertexCheck>,
}

/// Vertex test on the toric surface of the monomials not in I: at every
/// hull vertex v the primitive edge vectors u1, u2 of the difference lattice
/// must form a basis of it and v+u1, v+u2 must be in the set.
pub fn polytope_smoothness(ideal: &MonomialIdeal) -> Result<SmoothnessReport> {
    let complement: Vec<Monomial> =
        monomials_of_degree(ideal.d()).into_iter().filter(|m| !ideal.contains(m)).collect();
    let points: Vec<Pt> = complement.iter().map(project).collect();
    if points.len() < 3 {
        return Err(Error::Degenerate("fewer than three monomials outside I".into()));
    }
    let present: BTreeSet<Pt> = points.iter().copied().collect();
    let (hull, lattice, _) = lattice_of(&points)?;
    let n = hull.len();
    let vertices: Vec<VertexCheck> = (0..n)
        .map(|i| {
            let v = hull[i];
            let prev = hull[(i + n - 1) % n];
            let next = hull[(i + 1) % n];
            let u1 = lattice.primitive((next.0 - v.0, next.1 - v.1));
            let u2 = lattice.primitive((prev.0 - v.0, prev.1 - v.1));
            let det = u1.0 * u2.1 - u1.1 * u2.0;
            let neighbours_present =
                present.contains(&(v.0 + u1.0, v.1 + u1.1)) && present.contains(&(v.0 + u2.0, v.1 + u2.1));
            VertexCheck {
                vertex: v,
                edge_vectors: [u1, u2],
                det,
                neighbours_present,
                smooth: det.abs() == lattice.index() && neighbours_present,
            }
        })
        .collect();
    Ok(SmoothnessReport {
        smooth: vertices.iter().all(|v| v.smooth),
        point_set: "complement",
        lattice_index: lattice.index(),
        vertices,
    })
}

/// Every generator other than a pure power has three positive exponents.
pub fn interior_exponent_condition(ideal: &MonomialIdeal) -> bool {
    ideal.generators().iter().all(|m| m.is_pure_power() || m.support_size() == 3)
}

/// Equations of S_d in `K[x_0, …, x_{k+2}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantalSystem {
    pub d: u32,
    pub k: u32,
    pub generators: Vec<SparsePoly<BigInt>>,
    /// `x_i ↦` monomial in x, y, z.
    pub parametrization: Vec<Monomial>,
}

impl DeterminantalSystem {
    pub fn var_names(&self) -> Vec<String> {
        (0..self.k + 3).map(|i| format!("x{i}")).collect()
    }

    pub fn display(&self) -> Vec<String> {
        let names = self.var_names();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.generators.iter().map(|g| g.display_with(&refs)).collect()
    }

    pub fn expected_count(&self) -> usize {
        let k = self.k as u64;
        (if self.d % 2 == 1 { binomial(k, 2) + k } else { 1 + binomial(k, 2) }) as usize
    }

    /// Substitutes the parametrization into a form in the x_i.
    pub fn pullback(&self, g: &SparsePoly<BigInt>) -> SparsePoly<BigInt> {
        let mut out = SparsePoly::zero(3);
        for (e, c) in g.terms() {
            let mut m = vec![0u32; 3];
            for (i, &p) in e.iter().enumerate() {
                for v in 0..3 {
                    m[v] += p * self.parametrization[i].0[v];
                }
            }
            out.add_term(m, c.clone()).expect("three variables");
        }
        out
    }

    pub fn all_pull_back_to_zero(&self) -> bool {
        self.generators.iter().all(|g| self.pullback(g).is_zero())
    }
}

/// 2×2 minors of the displayed matrix, plus `x_0x_1 − x_3²` for even d.
pub fn determinantal_generators(d: u32) -> Result<DeterminantalSystem> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("d must be at least 3, got {d}")));
    }
    let k = d / 2;
    let n = (k + 3) as usize;
    let var = |i: u32| SparsePoly::variable(n, i as usize);
    let wrap = |i: u32| if i == k + 3 { 2 } else { i };
    let mut cols: Vec<[SparsePoly<BigInt>; 2]> = (0..k).map(|c| [var(3 + c), var(wrap(4 + c))]).collect();
    if d % 2 == 1 {
        let x0x1 = var(0).try_mul(&var(1))?;
        let x3sq = var(3).try_mul(&var(3))?;
        cols.push([x0x1, x3sq]);
    }
    let mut generators = Vec::new();
    if d % 2 == 0 {
        generators.push(var(0).try_mul(&var(1))?.try_sub(&var(3).try_mul(&var(3))?)?);
    }
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let m = cols[i][0].try_mul(&cols[j][1])?.try_sub(&cols[j][0].try_mul(&cols[i][1])?)?;
            generators.push(m);
        }
    }
    let sys = DeterminantalSystem { d, k, generators, parametrization: generalized_classical_ordered(d) };
    if !sys.all_pull_back_to_zero() {
        return Err(Error::Consistency(format!("a determinantal generator for d={d} does not vanish on S_d")));
    }
    Ok(sys)
}

/// Graded Betti numbers β_{i,j} of R/I(S_d), with β_{0,0} = 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub d: u32,
    pub k: u32,
    pub entries: BTreeMap<(u32, u32), u64>,
}

impl BettiTable {
    fn from_entries(d: u32, k: u32, raw: impl IntoIterator<Item = ((u32, u32), u64)>) -> Self {
        let mut entries = BTreeMap::new();
        for (key, v) in raw {
            if v > 0 {
                *entries.entry(key).or_insert(0) += v;
            }
        }
        Self { d, k, entries }
    }

    /// `Σ (−1)^i β_{i,j}`.
    pub fn alternating_sum(&self) -> i64 {
        self.entries.iter().map(|(&(i, _), &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    /// Coefficients of `N(t) = Σ (−1)^i β_{i,j} t^j`.
    pub fn numerator(&self) -> Vec<i64> {
        let top = self.entries.keys().map(|&(_, j)| j).max().unwrap_or(0) as usize;
        let mut n = vec![0i64; top + 1];
        for (&(i, j), &b) in &self.entries {
            n[j as usize] += if i % 2 == 0 { b as i64 } else { -(b as i64) };
        }
        n
    }

    /// `h(t) = N(t) / (1−t)^k` when the division is exact.
    pub fn h_polynomial(&self) -> Option<Vec<i64>> {
        let mut n = self.numerator();
        for _ in 0..self.k {
            // divide by (1 − t): q_j = Σ_{i≤j} n_i
            let mut q = Vec::with_capacity(n.len());
            let mut acc = 0;
            for &c in &n {
                acc += c;
                q.push(acc);
            }
            if q.pop() != Some(0) {
                return None;
            }
            n = q;
        }
        while n.len() > 1 && *n.last().unwrap() == 0 {
            n.pop();
        }
        Some(n)
    }

    /// Hilbert function of R/I at degree t, R having k+3 variables.
    pub fn hilbert_function(&self, t: u32) -> i64 {
        let nv = (self.k + 3) as u64;
        self.entries
            .iter()
            .filter(|(&(_, j), _)| j <= t)
            .map(|(&(i, j), &b)| {
                let c = binomial((t - j) as u64 + nv - 1, nv - 1) as i64 * b as i64;
                if i % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    pub fn rows(&self) -> Vec<Value> {
        self.entries.iter().map(|(&(i, j), &b)| json!({"i": i, "j": j, "beta": b})).collect()
    }
}

/// Eagon–Northcott for odd d, mapping cone over the Eagon–Northcott complex
/// of the 2×k linear matrix for even d.
pub fn betti_table(d: u32) -> Result<BettiTable> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("d must be at least 3, got {d}")));
    }
    let k = d / 2;
    let kk = k as u64;
    let c = |n: u64, r: u64| binomial(n, r);
    let mut raw = vec![((0, 0), 1u64)];
    if d % 2 == 1 {
        for i in 1..=k {
            let ii = i as u64;
            raw.push(((i, i + 1), ii * c(kk, ii + 1)));
            raw.push(((i, i + 2), ii * c(kk, ii)));
        }
    } else {
        raw.push(((1, 2), 1));
        for i in 1..=k {
            let ii = i as u64;
            raw.push(((i, i + 1), ii * c(kk, ii + 1)));
            raw.push(((i, i + 2), (ii - 1) * c(kk, ii)));
        }
    }
    Ok(BettiTable::from_entries(d, k, raw))
}

/// The table as displayed in print. Identical to [`betti_table`] for odd d;
/// for even d the last two homological degrees carry the displayed tail
/// `R(−k−1)^{(k−1)k} ⊕ R(−k)^k → R(−k−2)^k`.
pub fn printed_betti_table(d: u32) -> Result<BettiTable> {
    let t = betti_table(d)?;
    if d % 2 == 1 {
        return Ok(t);
    }
    let k = t.k;
    let kk = k as u64;
    let mut raw: Vec<((u32, u32), u64)> = t.entries.into_iter().filter(|&((i, _), _)| i < k - 1 || (k == 2 && i == 1)).collect();
    if k >= 3 {
        raw.push(((k - 1, k + 1), (kk - 1) * kk));
        raw.push(((k - 1, k), kk));
    }
    raw.push(((k, k + 2), kk));
    Ok(BettiTable::from_entries(d, k, raw))
}

/// Number of distinct t-fold sums of the parametrizing exponents, i.e. the
/// Hilbert function of the coordinate ring of S_d.
pub fn semigroup_hilbert_function(d: u32, t: u32) -> usize {
    let gens = generalized_classical_ordered(d);
    let mut cur: BTreeSet<[u32; 3]> = BTreeSet::from([[0, 0, 0]]);
    for _ in 0..t {
        cur = cur.iter().flat_map(|e| gens.iter().map(move |g| [e[0] + g.0[0], e[1] + g.0[1], e[2] + g.0[2]])).collect();
    }
    cur.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiChecks {
    pub alternating_sum: i64,
    pub h_polynomial: Option<Vec<i64>>,
    pub h_at_1: Option<i64>,
    pub hilbert_function_matches: bool,
}

impl BettiChecks {
    pub fn pass(&self, d: u32) -> bool {
        self.alternating_sum == 0 && self.h_at_1 == Some(d as i64) && self.hilbert_function_matches
    }
}

/// Runs the consistency checks, comparing with the semigroup count in
/// degrees 0..=max_t.
pub fn betti_checks(table: &BettiTable, max_t: u32) -> BettiChecks {
    let h = table.h_polynomial();
    BettiChecks {
        alternating_sum: table.alternating_sum(),
        h_at_1: h.as_ref().map(|h| h.iter().sum()),
        h_polynomial: h,
        hilbert_function_matches: (0..=max_t)
            .all(|t| table.hilbert_function(t) == semigroup_hilbert_function(table.d, t) as i64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{generalized_classical, invariant_monomials, normalize_action};

    #[test]
    fn classical_cubic_degree() {
        let i = generalized_classical(3).unwrap();
        let m = exponent_polytope_degree(&i).unwrap();
        assert_eq!((m.normalized_area, m.lattice_index, m.surface_degree), (9, 3, 3));
    }

    #[test]
    fn veronese_degree() {
        for d in 2..8 {
            let all = MonomialIdeal::new(d, monomials_of_degree(d)).unwrap();
            let m = exponent_polytope_degree(&all).unwrap();
            assert_eq!((m.lattice_index, m.normalized_area), (1, (d * d) as i64));
        }
    }

    #[test]
    fn degenerate_points() {
        let i = MonomialIdeal::new(3, vec![Monomial([3, 0, 0]), Monomial([0, 3, 0]), Monomial([2, 1, 0])]).unwrap();
        assert!(matches!(exponent_polytope_degree(&i), Err(Error::Degenerate(_))));
    }

    #[test]
    fn lattice_membership() {
        let l = Lattice::generated_by(&[(3, 0), (0, 3), (1, 1)]).unwrap();
        assert_eq!(l.index(), 3);
        assert!(l.contains((2, 2)) && l.contains((1, -2)) && !l.contains((1, 0)));
        assert_eq!(l.primitive((6, 0)), (3, 0));
        assert_eq!(l.primitive((4, 4)), (1, 1));
    }

    #[test]
    fn smoothness_examples() {
        assert!(polytope_smoothness(&generalized_classical(3).unwrap()).unwrap().smooth);
        assert!(polytope_smoothness(&generalized_classical(5).unwrap()).unwrap().smooth);
        assert!(!polytope_smoothness(&generalized_classical(4).unwrap()).unwrap().smooth);
        let i = invariant_monomials(&normalize_action(7, 0, 1, 3).unwrap()).ideal;
        assert!(polytope_smoothness(&i).unwrap().smooth);
    }

    #[test]
    fn quintic_generators() {
        let s = determinantal_generators(5).unwrap();
        assert_eq!(s.display(), ["x2x3 - x4^2", "-x0x1x4 + x3^3", "-x0x1x2 + x3^2x4"]);
        assert_eq!(s.generators.len(), s.expected_count());
        let s = determinantal_generators(6).unwrap();
        assert_eq!(s.generators.len(), 4);
        assert_eq!(s.display()[0], "x0x1 - x3^2");
        assert_eq!(determinantal_generators(3).unwrap().display(), ["-x0x1x2 + x3^3"]);
    }

    #[test]
    fn quintic_betti() {
        let t = betti_table(5).unwrap();
        let e: Vec<_> = t.entries.iter().map(|(&k, &v)| (k, v)).collect();
        assert_eq!(e, [((0, 0), 1), ((1, 2), 1), ((1, 3), 2), ((2, 4), 2)]);
        assert_eq!(t.alternating_sum(), 0);
        assert_eq!(t.h_polynomial().unwrap(), [1, 2, 2]);
        let c = betti_checks(&t, 6);
        assert!(c.pass(5), "{c:?}");
        let t3 = betti_table(3).unwrap();
        assert_eq!(betti_checks(&t3, 6).h_at_1, Some(3));
    }

    #[test]
    fn last_module_twist() {
        for d in 3..=12u32 {
            let t = betti_table(d).unwrap();
            let k = d / 2;
            let last: Vec<_> = t.entries.iter().filter(|(&(i, _), _)| i == k).collect();
            assert_eq!(last.len(), 1);
            let (&(_, j), &b) = last[0];
            assert_eq!(j, k + 2);
            assert_eq!(b, if d % 2 == 1 { k as u64 } else { k as u64 - 1 });
        }
    }

    #[test]
    fn even_display_is_inconsistent() {
        for d in [4u32, 6, 8, 10, 12] {
            let p = printed_betti_table(d).unwrap();
            assert!(!betti_checks(&p, 4).pass(d), "d={d}");
            assert!(betti_checks(&betti_table(d).unwrap(), 4).pass(d), "d={d}");
        }
        assert_eq!(printed_betti_table(7).unwrap(), betti_table(7).unwrap());
    }
}
