//! Equivalence classes of the actions `M_a`, 2 ≤ a ≤ d−1, under the moves
//! a ↦ d−a+1 and a ↦ a⁻¹, the closed-form class counts, and an oracle that
//! compares invariant ideals up to renaming the variables.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::actions::ideal_m_a;
use crate::arith::{euler_phi, factorize, gcd, is_prime, mod_inverse};
use crate::error::{Error, Result};

/// Shape of an equivalence class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ClassType {
    /// two elements, a² ≡ 1
    #[serde(rename = "i")]
    TwoI,
    /// two elements, a(d−a+1) ≡ 1
    #[serde(rename = "ii")]
    TwoII,
    /// two elements, both non-invertible
    #[serde(rename = "iii")]
    TwoIII,
    #[serde(rename = "three")]
    Three,
    #[serde(rename = "four")]
    Four,
    #[serde(rename = "six")]
    Six,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceClass {
    pub members: Vec<usize>,
    pub size: usize,
    #[serde(rename = "type")]
    pub kind: ClassType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassPartition {
    pub d: usize,
    pub classes: Vec<EquivalenceClass>,
}

impl ClassPartition {
    pub fn member_sets(&self) -> Vec<Vec<usize>> {
        self.classes.iter().map(|c| c.members.clone()).collect()
    }

    pub fn count(&self, kind: ClassType) -> usize {
        self.classes.iter().filter(|c| c.kind == kind).count()
    }

    pub fn class_of(&self, a: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.members.binary_search(&a).is_ok())
    }
}

fn check_range(d: usize, a: usize) -> Result<()> {
    if d < 4 || !(2..d).contains(&a) {
        return Err(Error::InvalidInput(format!("need d >= 4 and 2 <= a <= d-1, got d={d}, a={a}")));
    }
    Ok(())
}

/// Closure of {a} under a ↦ d−a+1 and, when a is a unit, a ↦ a⁻¹ (mod d).
pub fn orbit(d: usize, a: usize) -> Result<Vec<usize>> {
    check_range(d, a)?;
    let mut seen = BTreeSet::from([a]);
    let mut stack = vec![a];
    while let Some(x) = stack.pop() {
        let mut next = vec![d - x + 1];
        if let Ok(inv) = mod_inverse(x as u64, d as u64) {
            next.push(inv as usize);
        }
        for y in next {
            if (2..d).contains(&y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn class_type(d: usize, members: &[usize]) -> Result<ClassType> {
    let unit = |x: usize| gcd(x as u64, d as u64) == 1;
    match members.len() {
        2 => {
            let (a, b) = (members[0], members[1]);
            if members.iter().any(|&x| x * x % d == 1) {
                Ok(ClassType::TwoI)
            } else if a * b % d == 1 {
                Ok(ClassType::TwoII)
            } else if !unit(a) && !unit(b) {
                Ok(ClassType::TwoIII)
            } else {
                Err(Error::Consistency(format!("two-element class {members:?} at d={d} fits no type")))
            }
        }
        3 => Ok(ClassType::Three),
        4 => Ok(ClassType::Four),
        6 => Ok(ClassType::Six),
        n => Err(Error::Consistency(format!("class {members:?} at d={d} has {n} elements"))),
    }
}

/// Orbits of all a ∈ {2,…,d−1}, ordered by smallest member.
pub fn classify_moves(d: usize) -> Result<ClassPartition> {
    if d < 4 {
        return Err(Error::InvalidInput(format!("classification needs d >= 4, got {d}")));
    }
    let mut done = vec![false; d];
    let mut classes = Vec::new();
    for a in 2..d {
        if done[a] {
            continue;
        }
        let members = orbit(d, a)?;
        for &m in &members {
            done[m] = true;
        }
        let kind = class_type(d, &members)?;
        classes.push(EquivalenceClass { size: members.len(), members, kind });
    }
    Ok(ClassPartition { d, classes })
}

/// Whether `I_{a1}` and `I_{a2}` coincide after some permutation of x, y, z.
pub fn equivalent_ideal_oracle(d: usize, a1: usize, a2: usize) -> Result<bool> {
    check_range(d, a1)?;
    check_range(d, a2)?;
    let i1 = ideal_m_a(d, a1)?.ideal;
    let i2 = ideal_m_a(d, a2)?.ideal;
    Ok(i1.canonical_form() == i2.canonical_form())
}

/// Partition of {2,…,d−1} by equality of invariant ideals up to permutation.
pub fn oracle_partition(d: usize) -> Result<Vec<Vec<usize>>> {
    if d < 4 {
        return Err(Error::InvalidInput(format!("classification needs d >= 4, got {d}")));
    }
    let mut groups: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for a in 2..d {
        groups.entry(ideal_m_a(d, a)?.ideal.canonical_form()).or_default().push(a);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    Ok(out)
}

/// Formula value next to a brute-force count over Z/dZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Checked {
    pub formula: u64,
    pub brute: u64,
}

impl Checked {
    pub fn matches(&self) -> bool {
        self.formula == self.brute
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ArithmeticCounts {
    pub sqrt1: Checked,
    pub phi6: Checked,
    pub euler_phi: Checked,
}

/// Exponent of 2, of 3, and the primes above 3 with exponents.
struct Shape {
    alpha0: u32,
    alpha1: u32,
    big: Vec<(u64, u32)>,
    odd: usize,
}

fn shape(d: usize) -> Shape {
    let f = factorize(d as u64);
    let exp = |p: u64| f.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e);
    let big: Vec<(u64, u32)> = f.iter().copied().filter(|&(p, _)| p > 3).collect();
    Shape { alpha0: exp(2), alpha1: exp(3), odd: f.iter().filter(|&&(p, _)| p > 2).count(), big }
}

/// Solutions of x² ≡ 1 and of x² − x + 1 ≡ 0 (mod d), and φ(d): each by its
/// closed form and by scanning Z/dZ.
pub fn arithmetic_counts(d: usize) -> Result<ArithmeticCounts> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("need d >= 2, got {d}")));
    }
    let s = shape(d);
    let r = s.odd as u32;
    let sqrt1_formula = match s.alpha0 {
        0 | 1 => 1u64 << r,
        2 => 1 << (r + 1),
        _ => 1 << (r + 2),
    };
    // indexing with p0 = 2 and p1 = 3 always present, so r counts 3 as well
    let r_conv = 1 + s.big.len() as u32;
    let compatible = s.alpha0 == 0 && s.alpha1 <= 1 && s.big.iter().all(|&(p, _)| p % 6 == 1);
    let phi6_formula = if compatible { 1u64 << (r_conv - 1) } else { 0 };
    let dd = d as u64;
    let sqrt1_brute = (0..dd).filter(|&x| x * x % dd == 1 % dd).count() as u64;
    let phi6_brute = (0..dd).filter(|&x| (x * x + 1 + dd - x) % dd == 0).count() as u64;
    let phi_brute = (1..=dd).filter(|&x| gcd(x, dd) == 1).count() as u64;
    Ok(ArithmeticCounts {
        sqrt1: Checked { formula: sqrt1_formula, brute: sqrt1_brute },
        phi6: Checked { formula: phi6_formula, brute: phi6_brute },
        euler_phi: Checked { formula: euler_phi(dd), brute: phi_brute },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[allow(non_snake_case)]
pub struct ClassCounts {
    pub N21: i64,
    pub N22: i64,
    pub N23: i64,
    pub N2: i64,
    pub N3: i64,
    pub N4: i64,
    pub N6: i64,
    pub total: i64,
}

impl ClassCounts {
    pub fn from_partition(p: &ClassPartition) -> Self {
        let c = |k| p.count(k) as i64;
        let (n21, n22, n23) = (c(ClassType::TwoI), c(ClassType::TwoII), c(ClassType::TwoIII));
        let n2 = n21 + n22 + n23;
        let (n3, n4, n6) = (c(ClassType::Three), c(ClassType::Four), c(ClassType::Six));
        Self { N21: n21, N22: n22, N23: n23, N2: n2, N3: n3, N4: n4, N6: n6, total: n2 + n3 + n4 + n6 }
    }

    /// 2N2 + 3N3 + 4N4 + 6N6.
    pub fn weighted_size(&self) -> i64 {
        2 * self.N2 + 3 * self.N3 + 4 * self.N4 + 6 * self.N6
    }

    fn fields(&self) -> [(&'static str, i64); 8] {
        [
            ("N21", self.N21),
            ("N22", self.N22),
            ("N23", self.N23),
            ("N2", self.N2),
            ("N3", self.N3),
            ("N4", self.N4),
            ("N6", self.N6),
            ("total", self.total),
        ]
    }
}

/// Closed-form counts. `None` marks a quotient that is not an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[allow(non_snake_case)]
pub struct FormulaCounts {
    pub N21: i64,
    pub N22: i64,
    pub N23: i64,
    pub N2: i64,
    pub N3: i64,
    pub N4: Option<i64>,
    pub N6: Option<i64>,
    pub total: Option<i64>,
}

impl FormulaCounts {
    fn fields(&self) -> [(&'static str, Option<i64>); 8] {
        [
            ("N21", Some(self.N21)),
            ("N22", Some(self.N22)),
            ("N23", Some(self.N23)),
            ("N2", Some(self.N2)),
            ("N3", Some(self.N3)),
            ("N4", self.N4),
            ("N6", self.N6),
            ("total", self.total),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountComparison {
    pub d: usize,
    pub formula: FormulaCounts,
    pub oracle: ClassCounts,
}

impl CountComparison {
    pub fn matches(&self) -> BTreeMap<&'static str, bool> {
        self.formula
            .fields()
            .iter()
            .zip(self.oracle.fields())
            .map(|(&(name, f), (_, o))| (name, f == Some(o)))
            .collect()
    }

    pub fn mismatches(&self) -> Vec<&'static str> {
        self.matches().into_iter().filter(|&(_, ok)| !ok).map(|(k, _)| k).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "formula": self.formula,
            "oracle": self.oracle,
            "formula_matches": self.matches(),
        })
    }
}

fn exact_div(num: i64, den: i64) -> Option<i64> {
    (num % den == 0).then_some(num / den)
}

/// The printed closed forms for N21, N22, N23, N3, N4, N6.
///
/// N21 uses r = number of distinct odd primes (the count under which the
/// square-root lemma is stated). N22 is the literal 2^r with r counted in the
/// p0 = 2, p1 = 3 indexing. N23 runs over subsets of the distinct primes of d.
pub fn formula_counts(d: usize) -> Result<FormulaCounts> {
    if d < 5 {
        return Err(Error::InvalidInput(format!("class-count formulas need d >= 5, got {d}")));
    }
    let s = shape(d);
    let r = s.odd as u32;
    let n21: i64 = match s.alpha0 {
        0 => (1 << r) - 2,
        1 => (1 << r) - 1,
        2 => (1 << (r + 1)) - 1,
        _ => (1 << (r + 2)) - 1,
    };
    let r_conv = 1 + s.big.len() as u32;
    let compatible = s.alpha0 == 0 && s.alpha1 <= 1 && s.big.iter().all(|&(p, _)| p % 6 == 1);
    let n22: i64 = if compatible { 1 << r_conv } else { 0 };
    let primes: Vec<i64> = factorize(d as u64).iter().map(|&(p, _)| p as i64).collect();
    let di = d as i64;
    let mut n23 = 0i64;
    for mask in 1u32..(1 << primes.len()) {
        let k = mask.count_ones();
        if k < 2 {
            continue;
        }
        let prod: i64 = (0..primes.len()).filter(|i| mask >> i & 1 == 1).map(|i| primes[i]).product();
        let sign = if k % 2 == 0 { 1 } else { -1 };
        n23 += sign * ((1 << (k - 1)) - 1) * (di / prod);
    }
    let n2 = n21 + n22 + n23;
    let n3 = i64::from(s.alpha0 == 0);
    let phi = euler_phi(d as u64) as i64;
    let n4 = exact_div(di - 1 - phi - n21 - 2 * n23, 2);
    let n6 = n4.and_then(|n4| exact_div(di - 2 - 2 * n2 - 3 * n3 - 4 * n4, 6));
    let total = n4.zip(n6).map(|(a, b)| n2 + n3 + a + b);
    Ok(FormulaCounts { N21: n21, N22: n22, N23: n23, N2: n2, N3: n3, N4: n4, N6: n6, total })
}

/// Formula counts beside the counts read off the move partition.
pub fn class_count_formulas(d: usize) -> Result<CountComparison> {
    let formula = formula_counts(d)?;
    let oracle = ClassCounts::from_partition(&classify_moves(d)?);
    Ok(CountComparison { d, formula, oracle })
}

/// Class count predicted for d prime (n or n+1 by d mod 6) or d = p^r, r ≥ 2.
pub fn prime_and_primepower_counts(d: usize) -> Result<usize> {
    let f = factorize(d as u64);
    if f.len() != 1 {
        return Err(Error::Unsupported(format!("{d} is not a prime or a prime power")));
    }
    let (p, r) = (f[0].0 as i64, f[0].1);
    let di = d as i64;
    if r == 1 {
        if d < 5 {
            return Err(Error::Unsupported(format!("prime count needs d >= 5, got {d}")));
        }
        debug_assert!(is_prime(d as u64));
        return Ok(match d % 6 {
            5 => (d + 1) / 6,
            1 => (d - 1) / 6 + 1,
            _ => unreachable!("primes above 3 are 1 or 5 mod 6"),
        });
    }
    let div = |num: i64, den: i64| {
        exact_div(num, den).ok_or_else(|| Error::Consistency(format!("{num}/{den} is not an integer at d={d}")))
    };
    let count = if p == 2 {
        if r == 2 {
            1
        } else {
            di / 4 + 1
        }
    } else if p == 3 || p % 6 == 5 {
        1 + div(di - p, 2 * p)? + div(di * p - 2 * di - 3 * p, 6 * p)?
    } else {
        2 + div(di - p, 2 * p)? + div(di * p - 2 * di - 5 * p, 6 * p)?
    };
    Ok(count as usize)
}

/// Move partition against the permutation oracle for every d in the range.
/// Returns the d values where they disagree.
pub fn oracle_disagreements(ds: impl IntoParallelIterator<Item = usize>) -> Result<Vec<usize>> {
    let mut bad: Vec<usize> = ds
        .into_par_iter()
        .map(|d| -> Result<Option<usize>> {
            let moves = classify_moves(d)?.member_sets();
            Ok((oracle_partition(d)? != moves).then_some(d))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    bad.sort_unstable();
    Ok(bad)
}
