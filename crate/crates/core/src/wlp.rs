//! Failure of the weak Lefschetz property for monomial ideals generated in
//! degree d, Togliatti and GT verdicts, kernel certificates, and minimality.
//!
//! For an ideal I generated in degree d the kernel of
//! `×L : R_{d−1} → (R/I)_d` is `L·R_{d−1} ∩ I_d`, whose dimension is
//! `μ − rank(I_d → (R/(L))_d)`. Restricting the generators to the line L = 0
//! gives a μ × (d+1) matrix, far smaller than the direct map. The direct
//! matrix is still built for `multiplication_rank` and as a cross-check.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::actions::{invariant_monomials, Action, Monomial, MonomialIdeal};
use crate::arith::{binomial, gcd_all};
use crate::circulant::{root_form_product, ternary_product};
use crate::error::{Error, Result};
use crate::polymat::{IntMatrix, SparsePoly};

/// The linear form x + y + z.
pub const L_SUM: [i64; 3] = [1, 1, 1];

/// Degree-j monomials in three variables, descending lexicographic.
pub fn monomials_of_degree(j: u32) -> Vec<Monomial> {
    let mut v = Vec::with_capacity(((j + 1) * (j + 2) / 2) as usize);
    for a in (0..=j).rev() {
        for b in (0..=j - a).rev() {
            v.push(Monomial([a, b, j - a - b]));
        }
    }
    v
}

fn divides(g: &Monomial, m: &Monomial) -> bool {
    (0..3).all(|i| g.0[i] <= m.0[i])
}

/// Whether a monomial of any degree lies in the ideal.
pub fn ideal_contains(ideal: &MonomialIdeal, m: &Monomial) -> bool {
    if m.degree() == ideal.d() {
        ideal.contains(m)
    } else {
        ideal.generators().iter().any(|g| divides(g, m))
    }
}

pub fn is_artinian(ideal: &MonomialIdeal) -> bool {
    ideal.is_artinian()
}

/// Matrix of `×L : (R/I)_j → (R/I)_{j+1}` in monomial bases, with the bases.
pub fn multiplication_matrix(ideal: &MonomialIdeal, j: u32, l: [i64; 3]) -> (IntMatrix, Vec<Monomial>, Vec<Monomial>) {
    let source: Vec<Monomial> = monomials_of_degree(j).into_iter().filter(|m| !ideal_contains(ideal, m)).collect();
    let target: Vec<Monomial> =
        monomials_of_degree(j + 1).into_iter().filter(|m| !ideal_contains(ideal, m)).collect();
    let index: HashMap<Monomial, usize> = target.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut mat = IntMatrix::zeros(target.len(), source.len());
    for (c, m) in source.iter().enumerate() {
        for (v, &coef) in l.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            let mut e = m.0;
            e[v] += 1;
            if let Some(&r) = index.get(&Monomial(e)) {
                let cur = mat.get(r, c) + coef;
                mat.set(r, c, cur);
            }
        }
    }
    (mat, source, target)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankInfo {
    pub rank: usize,
    pub dim_source: usize,
    pub dim_target: usize,
}

/// Exact rank of `×L` from degree j to j+1, by building the matrix.
pub fn multiplication_rank(ideal: &MonomialIdeal, j: u32, l: [i64; 3]) -> RankInfo {
    let (m, s, t) = multiplication_matrix(ideal, j, l);
    RankInfo { rank: m.rank(), dim_source: s.len(), dim_target: t.len() }
}

/// Rows: generators of I restricted to L = 0, written in y, z after
/// scaling by α^d: `m(−βy−γz, αy, αz)`.
pub fn restriction_matrix(ideal: &MonomialIdeal, l: [i64; 3]) -> Result<IntMatrix> {
    let [al, be, ga] = l;
    if al == 0 {
        return Err(Error::InvalidInput("linear form needs a nonzero x coefficient".into()));
    }
    let d = ideal.d() as usize;
    let pow = |b: i64, e: u32| BigInt::from(b).pow(e);
    let rows = ideal
        .generators()
        .iter()
        .map(|m| {
            let [p, q, r] = m.0;
            let mut row = vec![BigInt::zero(); d + 1];
            let scale = pow(al, q + r);
            // (−βy − γz)^p = Σ_s C(p,s) (−β)^s (−γ)^{p−s} y^s z^{p−s}
            for s in 0..=p {
                let c = BigInt::from(binomial(p as u64, s as u64)) * pow(-be, s) * pow(-ga, p - s) * &scale;
                // column = exponent of y
                row[(s + q) as usize] += c;
            }
            row
        })
        .collect();
    Ok(IntMatrix::from_rows_with_cols(rows, d + 1))
}

/// `dim ker(×L : R_{d−1} → (R/I)_d)` for I generated in degree d.
pub fn kernel_dim(ideal: &MonomialIdeal, l: [i64; 3]) -> Result<usize> {
    Ok(ideal.mu() - restriction_matrix(ideal, l)?.rank())
}

/// Togliatti and GT verdict at the map from degree d−1 to d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WlpVerdict {
    pub d: u32,
    pub mu: usize,
    pub dim_source: usize,
    pub dim_target: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    /// Rank of the directly assembled matrix, when small enough to build.
    pub rank_direct: Option<usize>,
    pub is_artinian: bool,
    pub fails_injectivity: bool,
    pub fails_wlp_at_d_minus_1: bool,
    pub generator_bound_ok: bool,
    pub is_togliatti: bool,
    pub is_gt: bool,
}

/// Direct matrices are assembled up to this degree for cross-checking.
pub const DIRECT_RANK_MAX_D: u32 = 16;

/// Verdict for an ideal; `cyclic_invariant` says whether it is the full
/// invariant ideal of a diagonal cyclic action (the GT part of the verdict).
pub fn verdict_for_ideal(ideal: &MonomialIdeal, cyclic_invariant: bool) -> Result<WlpVerdict> {
    let d = ideal.d();
    let mu = ideal.mu();
    let dim_source = binomial(d as u64 + 1, 2) as usize;
    let dim_target = binomial(d as u64 + 2, 2) as usize - mu;
    let kernel = kernel_dim(ideal, L_SUM)?;
    let rank = dim_source - kernel;
    let rank_direct = (d <= DIRECT_RANK_MAX_D).then(|| multiplication_rank(ideal, d - 1, L_SUM).rank);
    if let Some(r) = rank_direct {
        if r != rank {
            return Err(Error::Consistency(format!(
                "restriction rank {rank} disagrees with direct rank {r} at d={d}"
            )));
        }
    }
    let is_artinian = ideal.is_artinian();
    let fails_injectivity = rank < dim_source;
    let generator_bound_ok = mu <= d as usize + 1;
    let is_togliatti = is_artinian && generator_bound_ok && fails_injectivity;
    Ok(WlpVerdict {
        d,
        mu,
        dim_source,
        dim_target,
        rank,
        kernel_dim: kernel,
        rank_direct,
        is_artinian,
        fails_injectivity,
        fails_wlp_at_d_minus_1: rank < dim_source.min(dim_target),
        generator_bound_ok,
        is_togliatti,
        is_gt: is_togliatti && cyclic_invariant,
    })
}

pub fn gt_verdict(action: &Action) -> Result<WlpVerdict> {
    verdict_for_ideal(&invariant_monomials(action).ideal, true)
}

/// `C_{d−1}` and `F = (x+y+z)·C_{d−1}` for a normalized action (0,a,b).
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCertificate {
    pub cofactor: SparsePoly<BigInt>,
    pub product: SparsePoly<BigInt>,
}

impl KernelCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "cofactor_terms": self.cofactor.len(),
            "product": self.product.to_json(),
        })
    }
}

fn certificate_weights(action: &Action) -> Result<(usize, usize)> {
    match action.weights() {
        [0, a, b] if 0 < a && a < b => Ok((a, b)),
        w => Err(Error::Unsupported(format!(
            "kernel certificate needs weights (0,a,b) with 0<a<b, got {w:?}"
        ))),
    }
}

/// Expands the certificate and checks that its support lies in I.
pub fn kernel_certificate(action: &Action) -> Result<KernelCertificate> {
    let (a, b) = certificate_weights(action)?;
    let d = action.d();
    let forms = (1..d).map(|j| vec![(0, 0, BigInt::one()), (1, a * j % d, BigInt::one()), (2, b * j % d, BigInt::one())]);
    let cofactor = root_form_product(d, 3, forms)?;
    let l = SparsePoly::from_terms(3, (0..3).map(|i| {
        let mut e = vec![0; 3];
        e[i] = 1;
        (e, BigInt::one())
    }))?;
    let product = l.try_mul(&cofactor)?;
    let ideal = invariant_monomials(action).ideal;
    for (e, _) in product.terms() {
        let m = Monomial([e[0], e[1], e[2]]);
        if !ideal.contains(&m) {
            return Err(Error::Consistency(format!("certificate term {m} is not an invariant monomial")));
        }
    }
    Ok(KernelCertificate { cofactor, product })
}

/// Multiplies the direct matrix of `×(x+y+z)` at degree d−1 by the cofactor's
/// coefficient vector; true iff the cofactor is a nonzero kernel vector.
pub fn cofactor_in_kernel(ideal: &MonomialIdeal, cofactor: &SparsePoly<BigInt>) -> bool {
    let (m, source, _) = multiplication_matrix(ideal, ideal.d() - 1, L_SUM);
    let v: Vec<BigInt> = source
        .iter()
        .map(|s| cofactor.coeff(&s.0).cloned().unwrap_or_else(BigInt::zero))
        .collect();
    v.iter().any(|x| !x.is_zero()) && m.mul_vec(&v).iter().all(Zero::is_zero)
}

/// Whether a generator set is a monomial Togliatti system.
pub fn is_togliatti(ideal: &MonomialIdeal) -> Result<bool> {
    Ok(ideal.is_artinian() && ideal.mu() <= ideal.d() as usize + 1 && kernel_dim(ideal, L_SUM)? > 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetMinimality {
    pub minimal: bool,
    /// Generators whose removal leaves a Togliatti system.
    pub removable: Vec<Monomial>,
}

/// Tries every corank-one subset. A Togliatti proper subset forces a
/// Togliatti corank-one subset because the kernel only grows with the ideal.
pub fn minimality_subset_oracle(ideal: &MonomialIdeal) -> Result<SubsetMinimality> {
    let mut removable = Vec::new();
    for (i, g) in ideal.generators().iter().enumerate() {
        if g.is_pure_power() {
            continue;
        }
        if is_togliatti(&ideal.without(i))? {
            removable.push(*g);
        }
    }
    Ok(SubsetMinimality { minimal: removable.is_empty(), removable })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CirculantMinimality {
    pub minimal: bool,
    /// Invariant monomials whose coefficient in det A_d^{a,b} vanishes.
    pub missing: Vec<Monomial>,
}

/// Minimal iff every invariant monomial appears in det A_d^{a,b}.
pub fn minimality_circulant(action: &Action) -> Result<CirculantMinimality> {
    let (a, b) = certificate_weights(action)?;
    let det = ternary_product(action.d(), a, b)?;
    let ideal = invariant_monomials(action).ideal;
    let missing: Vec<Monomial> = ideal.generators().iter().copied().filter(|m| det.coeff(&m.0).is_none()).collect();
    for (e, _) in det.terms() {
        if !ideal.contains(&Monomial([e[0], e[1], e[2]])) {
            return Err(Error::Consistency(format!("det A_d^{{a,b}} has a non-invariant term {e:?}")));
        }
    }
    Ok(CirculantMinimality { minimal: missing.is_empty(), missing })
}

/// One (d, a, b) of the conjecture scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub d: usize,
    pub a: usize,
    pub b: usize,
    pub mu: usize,
    pub status: ScanStatus,
    pub is_togliatti: bool,
    pub circulant_minimal: Option<bool>,
    pub subset_minimal: Option<bool>,
    pub circulant_missing: Vec<Monomial>,
    pub subset_removable: Vec<Monomial>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanStatus {
    /// Togliatti and minimal by both methods.
    Minimal,
    /// a = b: μ = d + 2 > d + 1, so not a Togliatti system at all.
    ExcludedRepeatedWeight,
    /// Distinct weights but μ exceeds d + 1.
    GeneratorBoundExceeded,
    /// Togliatti but a method reports non-minimal, or the methods disagree.
    Counterexample,
    /// Distinct weights, bound holds, yet injectivity does not fail.
    NotTogliatti,
}

impl ScanEntry {
    pub fn is_finding(&self) -> bool {
        !matches!(self.status, ScanStatus::Minimal | ScanStatus::ExcludedRepeatedWeight)
    }
}

/// Subset oracle is run when μ is at most this.
pub const SUBSET_ORACLE_MAX_MU: usize = 40;

pub fn scan_one(d: usize, a: usize, b: usize) -> Result<ScanEntry> {
    let action = Action::new(d, [0, a as i64, b as i64])?;
    let ideal = invariant_monomials(&action).ideal;
    let mu = ideal.mu();
    let togliatti = is_togliatti(&ideal)?;
    let mut e = ScanEntry {
        d,
        a,
        b,
        mu,
        status: ScanStatus::Minimal,
        is_togliatti: togliatti,
        circulant_minimal: None,
        subset_minimal: None,
        circulant_missing: vec![],
        subset_removable: vec![],
    };
    if a == b {
        e.status = ScanStatus::ExcludedRepeatedWeight;
        return Ok(e);
    }
    let circ = minimality_circulant(&action)?;
    e.circulant_minimal = Some(circ.minimal);
    e.circulant_missing = circ.missing;
    if mu <= SUBSET_ORACLE_MAX_MU {
        let sub = minimality_subset_oracle(&ideal)?;
        e.subset_minimal = Some(sub.minimal);
        e.subset_removable = sub.removable;
    }
    e.status = if mu > d + 1 {
        ScanStatus::GeneratorBoundExceeded
    } else if !togliatti {
        ScanStatus::NotTogliatti
    } else if !circ.minimal || e.subset_minimal == Some(false) {
        ScanStatus::Counterexample
    } else {
        ScanStatus::Minimal
    };
    Ok(e)
}

/// Every 1 ≤ a ≤ b ≤ d−1 with gcd(a,b,d) = 1 for d in the range, in
/// (d, a, b) order.
pub fn conjecture_scan(dmin: usize, dmax: usize) -> Result<Vec<ScanEntry>> {
    let triples: Vec<(usize, usize, usize)> = (dmin.max(3)..=dmax)
        .flat_map(|d| (1..d).flat_map(move |a| (a..d).map(move |b| (d, a, b))))
        .filter(|&(d, a, b)| gcd_all(&[a as u64, b as u64, d as u64]) == 1)
        .collect();
    triples.into_par_iter().map(|(d, a, b)| scan_one(d, a, b)).collect()
}

/// Kernel dimension for `x+y+z` against seeded random forms with nonzero
/// integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralLSample {
    pub l: [i64; 3],
    pub kernel_dim: usize,
}

pub fn general_l_samples(ideal: &MonomialIdeal, seed: u64, samples: usize) -> Result<Vec<GeneralLSample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let mut l = [0i64; 3];
            for c in &mut l {
                let v: i64 = rng.gen_range(1..=97);
                *c = if rng.gen_bool(0.5) { v } else { -v };
            }
            Ok(GeneralLSample { l, kernel_dim: kernel_dim(ideal, l)? })
        })
        .collect()
}
