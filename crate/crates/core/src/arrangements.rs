//! Line arrangements over Q(ζ_d): the Ceva configuration C(d), the
//! arrangement H_d, the Fermat arrangement F_d, their singular points and
//! the numerical freeness test.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::actions::{ideal_m_a, Monomial};
use crate::arith::binomial;
use crate::circulant::root_form_product;
use crate::cyclotomic::CyclotomicInt;
use crate::error::{Error, Result};

/// Homogeneous triple over Z[ζ_d]; a line's coefficients or a point's
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Triple(pub [CyclotomicInt; 3]);

pub type ProjLine = Triple;
pub type ProjPoint = Triple;

impl Triple {
    /// `(c_0 ζ^{e_0}, c_1 ζ^{e_1}, c_2 ζ^{e_2})` with `c_i ∈ {−1, 0, 1}`.
    pub fn from_roots(d: usize, entries: [(i64, i64); 3]) -> Self {
        Triple(entries.map(|(c, e)| CyclotomicInt::root_power(d, e).scale(&BigInt::from(c))))
    }

    pub fn dot(&self, other: &Self) -> CyclotomicInt {
        let t: Vec<CyclotomicInt> = (0..3).map(|i| &self.0[i] * &other.0[i]).collect();
        &(&t[0] + &t[1]) + &t[2]
    }

    pub fn cross(&self, o: &Self) -> Self {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &o.0;
        Triple([&(a1 * b2) - &(a2 * b1), &(a2 * b0) - &(a0 * b2), &(a0 * b1) - &(a1 * b0)])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(CyclotomicInt::is_zero)
    }

    /// Projective equality: all 2×2 minors of the stacked pair vanish.
    pub fn same_point(&self, o: &Self) -> bool {
        self.cross(o).is_zero()
    }
}

/// `C(d)`: d² lines `L_{i,j} = x + ζ^i y + ζ^j z` and 3d points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CevaReport {
    pub d: usize,
    pub points: usize,
    pub lines: usize,
    pub points_per_line: usize,
    pub lines_per_point: usize,
    /// `(p_ℓ, l_p)` as in the symbol `(p_{l_p}, l_{p_ℓ})`.
    pub symbol: String,
}

pub fn ceva_lines(d: usize) -> Vec<ProjLine> {
    let mut v = Vec::with_capacity(d * d);
    for i in 0..d as i64 {
        for j in 0..d as i64 {
            v.push(Triple::from_roots(d, [(1, 0), (1, i), (1, j)]));
        }
    }
    v
}

pub fn ceva_points(d: usize) -> Vec<ProjPoint> {
    let mut v = Vec::with_capacity(3 * d);
    for s in 0..d as i64 {
        v.push(Triple::from_roots(d, [(1, 0), (0, 0), (-1, s)]));
        v.push(Triple::from_roots(d, [(0, 0), (1, 0), (-1, s)]));
        v.push(Triple::from_roots(d, [(1, 0), (-1, s), (0, 0)]));
    }
    v
}

/// Builds C(d) and checks it is a (3d_d, d²_3) configuration.
pub fn ceva_configuration(d: usize) -> Result<CevaReport> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("d must be at least 3, got {d}")));
    }
    let lines = ceva_lines(d);
    let points = ceva_points(d);
    let on: Vec<Vec<bool>> = lines.iter().map(|l| points.iter().map(|p| l.dot(p).is_zero()).collect()).collect();
    for (li, row) in on.iter().enumerate() {
        let n = row.iter().filter(|&&b| b).count();
        if n != 3 {
            return Err(Error::Consistency(format!("line {li} of C({d}) carries {n} points, expected 3")));
        }
    }
    for pi in 0..points.len() {
        let n = on.iter().filter(|row| row[pi]).count();
        if n != d {
            return Err(Error::Consistency(format!("point {pi} of C({d}) lies on {n} lines, expected {d}")));
        }
    }
    Ok(CevaReport {
        d,
        points: points.len(),
        lines: lines.len(),
        points_per_line: 3,
        lines_per_point: d,
        symbol: format!("({}_{}, {}_{})", 3 * d, d, d * d, 3),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrangementKind {
    Hd,
    Fermat,
}

/// `H_d = {x, y, z} ∪ {L_{i,j}}` or the 3d lines of
/// `(x^d − y^d)(x^d − z^d)(y^d − z^d)`.
pub fn build_arrangement(kind: ArrangementKind, d: usize) -> Result<Vec<ProjLine>> {
    if d < 3 {
        return Err(Error::InvalidInput(format!("d must be at least 3, got {d}")));
    }
    Ok(match kind {
        ArrangementKind::Hd => {
            let mut v = vec![
                Triple::from_roots(d, [(1, 0), (0, 0), (0, 0)]),
                Triple::from_roots(d, [(0, 0), (1, 0), (0, 0)]),
                Triple::from_roots(d, [(0, 0), (0, 0), (1, 0)]),
            ];
            v.extend(ceva_lines(d));
            v
        }
        ArrangementKind::Fermat => {
            let mut v = Vec::with_capacity(3 * d);
            for j in 0..d as i64 {
                v.push(Triple::from_roots(d, [(1, 0), (-1, j), (0, 0)]));
                v.push(Triple::from_roots(d, [(1, 0), (0, 0), (-1, j)]));
                v.push(Triple::from_roots(d, [(0, 0), (1, 0), (-1, j)]));
            }
            v
        }
    })
}

/// Singular points of an arrangement by multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub lines: usize,
    /// multiplicity h ↦ number of points b_h
    pub counts: BTreeMap<usize, usize>,
    pub c1: i64,
    /// `Σ C(h−1, 2) b_h`
    pub weighted_sum: i64,
}

impl Census {
    pub fn count(&self, h: usize) -> usize {
        self.counts.get(&h).copied().unwrap_or(0)
    }

    /// `c_2 = C(c_1, 2) − Σ C(h−1, 2) b_h`.
    pub fn c2(&self) -> i64 {
        binomial(self.c1 as u64, 2) as i64 - self.weighted_sum
    }

    pub fn rows(&self) -> Vec<Value> {
        self.counts.iter().map(|(h, b)| json!({"mult": h, "count": b})).collect()
    }
}

/// Intersects all line pairs and groups them by common point.
pub fn singular_census(lines: &[ProjLine]) -> Result<Census> {
    let n = lines.len();
    let mut covered = vec![vec![false; n]; n];
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..n {
        if let Some(j) = (i + 1..n).find(|&j| lines[i].same_point(&lines[j])) {
            return Err(Error::DuplicateLines(i, j));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if covered[i][j] {
                continue;
            }
            let p = lines[i].cross(&lines[j]);
            let through: Vec<usize> = (0..n).filter(|&k| lines[k].dot(&p).is_zero()).collect();
            for (x, &a) in through.iter().enumerate() {
                for &b in &through[x + 1..] {
                    covered[a][b] = true;
                }
            }
            *counts.entry(through.len()).or_insert(0) += 1;
        }
    }
    let pairs: u64 = counts.iter().map(|(&h, &b)| binomial(h as u64, 2) * b as u64).sum();
    if pairs != binomial(n as u64, 2) {
        return Err(Error::Consistency(format!("census covers {pairs} line pairs out of {}", binomial(n as u64, 2))));
    }
    let weighted_sum = counts.iter().map(|(&h, &b)| (binomial(h as u64 - 1, 2) * b as u64) as i64).sum();
    Ok(Census { lines: n, counts, c1: n as i64 - 1, weighted_sum })
}

/// Exponents (a, b) with a + b = c_1 and ab = c_2, when both are
/// nonnegative integers. Necessary for freeness, not sufficient.
pub fn freeness_diagnostic(census: &Census) -> Option<(i64, i64)> {
    let c1 = census.c1;
    let c2 = census.c2();
    let disc = c1 * c1 - 4 * c2;
    if disc < 0 {
        return None;
    }
    let s = (disc as f64).sqrt().round() as i64;
    let s = (s - 2..=s + 2).find(|&t| t >= 0 && t * t == disc)?;
    if (c1 - s) % 2 != 0 || c1 - s < 0 {
        return None;
    }
    Some(((c1 - s) / 2, (c1 + s) / 2))
}

pub fn freeness_json(census: &Census) -> Value {
    match freeness_diagnostic(census) {
        Some((a, b)) => json!([a, b]),
        None => json!("necessary condition fails"),
    }
}

/// Result of expanding `L·∏_{j=1}^{d−1} L[j]` for one linear form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipCheck {
    pub d: usize,
    pub a: usize,
    pub l: [i64; 3],
    pub terms: usize,
    pub member: bool,
    pub outside: Vec<Monomial>,
}

/// `L[j] = αx + βζ^j y + γζ^{aj} z`; the product over j = 0..d−1 must lie
/// in `I_a`.
pub fn certificate_product_membership(d: usize, a: usize, l: [i64; 3]) -> Result<MembershipCheck> {
    if l.contains(&0) {
        return Err(Error::InvalidInput(format!("linear form {l:?} has a zero coefficient")));
    }
    let ideal = ideal_m_a(d, a)?.ideal;
    let forms = (0..d).map(|j| {
        vec![
            (0, 0, BigInt::from(l[0])),
            (1, j % d, BigInt::from(l[1])),
            (2, a * j % d, BigInt::from(l[2])),
        ]
    });
    let f = root_form_product(d, 3, forms)?;
    let outside: Vec<Monomial> = f
        .terms()
        .map(|(e, _)| Monomial([e[0], e[1], e[2]]))
        .filter(|m| !ideal.contains(m))
        .collect();
    Ok(MembershipCheck { d, a, l, terms: f.len(), member: outside.is_empty(), outside })
}

/// Seeded linear forms with coefficients in ±1..=9.
pub fn random_forms(seed: u64, count: usize) -> Vec<[i64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            [(); 3].map(|_| {
                let v: i64 = rng.gen_range(1..=9);
                if rng.gen_bool(0.5) {
                    v
                } else {
                    -v
                }
            })
        })
        .collect()
}
