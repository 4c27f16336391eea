//! Cartan matrices, positive roots and coroots, and simple reflections.
//!
//! Conventions: `a[i][j] = ⟨α_i, α_j^∨⟩`, and for `u ≠ v` the game weight is
//! `n_{v,u} = -a[u][v]`. The pairing of `λ = Σ c_j α_j` with `α_i^∨` is
//! `Σ_j c_j a[j][i]`.

mod diagram;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use diagram::{CartanType, DiagramJson, DiagramLabel, DynkinDiagram, EdgeRecord, Family};

use crate::error::{Error, Result};

pub const DEFAULT_ROOT_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl CartanMatrix {
    pub fn of(d: &DynkinDiagram) -> CartanMatrix {
        let n = d.rank();
        let mut entries = vec![0; n * n];
        for u in 0..n {
            for v in 0..n {
                entries[u * n + v] = if u == v {
                    2
                } else {
                    -i64::from(d.arrows(u, v))
                };
            }
        }
        CartanMatrix { n, entries }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> CartanMatrix {
        let n = rows.len();
        CartanMatrix {
            n,
            entries: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> CartanMatrix {
        let n = self.n;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.get(i, j);
            }
        }
        CartanMatrix { n, entries }
    }

    /// `⟨λ, α_i^∨⟩` for `λ` given in simple-root coordinates.
    pub fn pairing(&self, coeffs: &[i64], i: usize) -> i64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| c * self.get(j, i))
            .sum()
    }

    /// `s_i(λ) = λ − ⟨λ, α_i^∨⟩ α_i`, in place.
    pub fn reflect_in_place(&self, coeffs: &mut [i64], i: usize) {
        let p = self.pairing(coeffs, i);
        coeffs[i] -= p;
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.n) {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "[{}]", cells.join(""))?;
        }
        Ok(())
    }
}

pub fn cartan_matrix(d: &DynkinDiagram) -> CartanMatrix {
    CartanMatrix::of(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Root,
    Coroot,
}

/// Integer coefficients over the simple roots (or simple coroots).
///
/// Ordered by height, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootVector {
    pub coeffs: Vec<i64>,
    pub basis: Basis,
}

impl RootVector {
    pub fn new(coeffs: Vec<i64>, basis: Basis) -> Self {
        RootVector { coeffs, basis }
    }

    pub fn simple(n: usize, i: usize, basis: Basis) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[i] = 1;
        RootVector { coeffs, basis }
    }

    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0) && self.coeffs.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.coeffs.iter().all(|&c| c <= 0) && self.coeffs.iter().any(|&c| c < 0)
    }

    pub fn negated(&self) -> Self {
        RootVector {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            basis: self.basis,
        }
    }

    /// True when every nonzero coefficient lies on a vertex of `support`.
    pub fn supported_on(&self, support: &[bool]) -> bool {
        self.coeffs
            .iter()
            .zip(support)
            .all(|(&c, &inside)| c == 0 || inside)
    }

    /// Sum of the coefficients at the vertices of `active`.
    pub fn i_height(&self, active: &ActiveSet) -> i64 {
        active.iter().map(|i| self.coeffs[i]).sum()
    }
}

impl Ord for RootVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.height()
            .cmp(&other.height())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
            .then_with(|| self.basis.cmp(&other.basis))
    }
}

impl PartialOrd for RootVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.basis {
            Basis::Root => "a",
            Basis::Coroot => "a^v",
        };
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            match c {
                0 => {}
                1 => terms.push(format!("{sym}{}", i + 1)),
                -1 => terms.push(format!("-{sym}{}", i + 1)),
                c => terms.push(format!("{c}{sym}{}", i + 1)),
            }
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + ").replace("+ -", "- "))
        }
    }
}

/// The modified vertices `I`; `J` is the complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActiveSet {
    n: usize,
    members: BTreeSet<usize>,
}

impl ActiveSet {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n });
        }
        Ok(ActiveSet { n, members })
    }

    /// From 1-based vertex labels.
    pub fn from_labels(n: usize, labels: &[usize]) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&v| v == 0 || v > n) {
            return Err(Error::VertexOutOfRange {
                vertex: bad.wrapping_sub(1),
                n,
            });
        }
        Self::new(n, labels.iter().map(|v| v - 1))
    }

    /// From the complement `J`, 0-based.
    pub fn from_complement(n: usize, inactive: impl IntoIterator<Item = usize>) -> Result<Self> {
        let j = Self::new(n, inactive)?;
        Ok(j.complement())
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        ActiveSet {
            n,
            members: (0..n).filter(|&i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn all(n: usize) -> Self {
        ActiveSet {
            n,
            members: (0..n).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(&v)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn complement(&self) -> ActiveSet {
        ActiveSet {
            n: self.n,
            members: (0..self.n).filter(|v| !self.members.contains(v)).collect(),
        }
    }

    pub fn indicator(&self) -> Vec<bool> {
        (0..self.n).map(|v| self.contains(v)).collect()
    }

    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &v| m | 1 << v)
    }

    /// 1-based labels.
    pub fn labels(&self) -> Vec<usize> {
        self.members.iter().map(|v| v + 1).collect()
    }
}

impl fmt::Display for ActiveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

pub fn i_height(gamma: &RootVector, active: &ActiveSet) -> i64 {
    gamma.i_height(active)
}

/// Applies `s_i` to a vector expressed in the basis of `basis`.
///
/// Coroots live in the dual root system, whose Cartan matrix is the transpose.
pub fn reflect(cartan: &CartanMatrix, lambda: &RootVector, i: usize) -> RootVector {
    let mut coeffs = lambda.coeffs.clone();
    match lambda.basis {
        Basis::Root => cartan.reflect_in_place(&mut coeffs, i),
        Basis::Coroot => cartan.transpose().reflect_in_place(&mut coeffs, i),
    }
    RootVector {
        coeffs,
        basis: lambda.basis,
    }
}

/// Closure of the simple roots under simple reflections, restricted to the
/// positive orthant, in (height, lexicographic) order.
fn closure(cartan: &CartanMatrix, basis: Basis, cap: usize) -> Result<Vec<RootVector>> {
    let n = cartan.rank();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push(e);
    }
    let mut head = 0;
    while head < queue.len() {
        let root = queue[head].clone();
        head += 1;
        for i in 0..n {
            let mut image = root.clone();
            cartan.reflect_in_place(&mut image, i);
            if image.iter().all(|&c| c >= 0) && image.iter().any(|&c| c > 0) && seen.insert(image.clone()) {
                if seen.len() > cap {
                    return Err(Error::NotFiniteType { cap });
                }
                queue.push(image);
            }
        }
    }
    let mut roots: Vec<RootVector> = queue
        .into_iter()
        .map(|coeffs| RootVector { coeffs, basis })
        .collect();
    roots.sort();
    Ok(roots)
}

pub fn positive_roots_capped(d: &DynkinDiagram, cap: usize) -> Result<Vec<RootVector>> {
    if !d.is_crystallographic() {
        return Err(Error::NotCrystallographic);
    }
    closure(&CartanMatrix::of(d), Basis::Root, cap)
}

pub fn positive_roots(d: &DynkinDiagram) -> Result<Vec<RootVector>> {
    positive_roots_capped(d, DEFAULT_ROOT_CAP)
}

/// Positive coroots over the simple coroots: the positive roots of the dual system.
pub fn positive_coroots(d: &DynkinDiagram) -> Result<Vec<RootVector>> {
    if !d.is_crystallographic() {
        return Err(Error::NotCrystallographic);
    }
    closure(&CartanMatrix::of(d).transpose(), Basis::Coroot, DEFAULT_ROOT_CAP)
}

/// A crystallographic diagram together with its Cartan matrix and positive
/// roots and coroots.
#[derive(Debug, Clone)]
pub struct RootSystem {
    diagram: DynkinDiagram,
    cartan: CartanMatrix,
    roots: Vec<RootVector>,
    coroots: Vec<RootVector>,
}

impl RootSystem {
    pub fn new(diagram: &DynkinDiagram) -> Result<Self> {
        let roots = positive_roots(diagram)?;
        let coroots = positive_coroots(diagram)?;
        Ok(RootSystem {
            diagram: diagram.clone(),
            cartan: CartanMatrix::of(diagram),
            roots,
            coroots,
        })
    }

    pub fn of_type(ty: CartanType) -> Self {
        Self::new(&DynkinDiagram::from_type(ty)).expect("catalog diagrams are of finite type")
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        &self.diagram
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[RootVector] {
        &self.roots
    }

    pub fn positive_coroots(&self) -> &[RootVector] {
        &self.coroots
    }

    /// Positive roots supported on `subset` (the parabolic subsystem `Φ_J⁺`).
    pub fn parabolic_roots(&self, subset: &ActiveSet) -> Vec<&RootVector> {
        let support = subset.indicator();
        self.roots.iter().filter(|r| r.supported_on(&support)).collect()
    }

    /// Positive roots with some coefficient outside `subset` (`Φ⁺ ∖ Φ_J⁺`).
    pub fn roots_outside(&self, subset: &ActiveSet) -> Vec<&RootVector> {
        let support = subset.indicator();
        self.roots.iter().filter(|r| !r.supported_on(&support)).collect()
    }

    /// `(Φ^∨)⁺ ∖ (Φ_J^∨)⁺`.
    pub fn coroots_outside(&self, subset: &ActiveSet) -> Vec<&RootVector> {
        let support = subset.indicator();
        self.coroots.iter().filter(|r| !r.supported_on(&support)).collect()
    }

    pub fn highest_root(&self) -> &RootVector {
        self.roots.last().expect("a root system has at least one root")
    }

    pub fn is_root(&self, coeffs: &[i64]) -> bool {
        let probe = RootVector::new(coeffs.to_vec(), Basis::Root);
        if probe.is_positive() {
            self.roots.binary_search(&probe).is_ok()
        } else if probe.is_negative() {
            self.roots.binary_search(&probe.negated()).is_ok()
        } else {
            false
        }
    }
}
