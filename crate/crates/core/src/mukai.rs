//! Picard number, index and dimension of `G/P` and the Mukai-type inequalities.
//!
//! For `Δ_P ⊊ Δ` and `β ∈ Δ∖Δ_P` put `n_β = Σ_{α∈Φ⁺∖Φ_P⁺} ⟨α, β^∨⟩`.
//! The strong inequality is `Σ_β (n_β − 1) ≤ |Φ⁺∖Φ_P⁺|` and its consequence
//! is `|Δ∖Δ_P| · (gcd_β n_β − 1) ≤ |Φ⁺∖Φ_P⁺|`.

use std::fmt::Write as _;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{fire, Configuration, GameSpec};
use crate::root_system::{ActiveSet, CartanType, RootSystem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParabolicDatum {
    pub diagram: String,
    pub delta_p: ActiveSet,
    pub picard: usize,
    pub dimension: usize,
    /// `(β, n_β)` for every `β ∈ Δ∖Δ_P`, 0-based.
    pub n_beta: Vec<(usize, i64)>,
    pub index_gcd: i64,
}

pub fn parabolic_datum(rs: &RootSystem, delta_p: &ActiveSet) -> Result<ParabolicDatum> {
    if delta_p.len() == rs.rank() {
        return Err(Error::Domain("Δ_P must be a proper subset of Δ".into()));
    }
    let outside = rs.roots_outside(delta_p);
    let n_beta: Vec<(usize, i64)> = delta_p
        .complement()
        .iter()
        .map(|b| {
            let n = outside.iter().map(|a| rs.cartan().pairing(&a.coeffs, b)).sum();
            (b, n)
        })
        .collect();
    let index_gcd = n_beta.iter().fold(0, |g, &(_, n)| g.gcd(&n));
    Ok(ParabolicDatum {
        diagram: rs.diagram().label().to_string(),
        delta_p: delta_p.clone(),
        picard: n_beta.len(),
        dimension: outside.len(),
        n_beta,
        index_gcd,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(lhs: i64, rhs: i64) -> Self {
        InequalityCheck { lhs, rhs, holds: lhs <= rhs }
    }

    pub fn equality(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `Σ_β (n_β − 1) ≤ dim`.
pub fn check_strong_inequality(p: &ParabolicDatum) -> InequalityCheck {
    let lhs = p.n_beta.iter().map(|&(_, n)| n - 1).sum();
    InequalityCheck::new(lhs, p.dimension as i64)
}

/// `picard · (gcd − 1) ≤ dim`. Also checks that the left side is bounded by
/// the strong left side, as `gcd ≤ n_β` for each `β`.
pub fn check_mukai_consequence(p: &ParabolicDatum) -> Result<InequalityCheck> {
    let lhs = p.picard as i64 * (p.index_gcd - 1);
    let strong = check_strong_inequality(p);
    if lhs > strong.lhs {
        return Err(Error::Consistency(format!(
            "Mukai left side {lhs} exceeds the strong left side {} for Δ_P = {}",
            strong.lhs, p.delta_p
        )));
    }
    Ok(InequalityCheck::new(lhs, p.dimension as i64))
}

/// `Σ_{α∈Φ⁺} ⟨α, β^∨⟩ = 2` for every simple root `β`.
pub fn root_sum_lemma_holds(rs: &RootSystem) -> bool {
    (0..rs.rank()).all(|b| {
        rs.positive_roots()
            .iter()
            .map(|a| rs.cartan().pairing(&a.coeffs, b))
            .sum::<i64>()
            == 2
    })
}

/// One component `P_j` of `Δ_P` next to `β` and the end of its coroot string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StringEnd {
    pub component: Vec<usize>,
    /// Arrows from the vertex of `P_j` next to `β` towards `β`.
    pub k: u32,
    /// Coefficient of that vertex's root in `Σ_{α∈Φ_{P_j}⁺} α`.
    pub h: i64,
    /// The last coroot `β^∨ + γ^j` of the string, over the simple coroots.
    pub terminal: Vec<i64>,
}

impl StringEnd {
    pub fn height(&self) -> i64 {
        self.terminal.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StringCheck {
    pub beta: usize,
    pub n_beta: i64,
    pub ends: Vec<StringEnd>,
    /// `β^∨ + Σ_j γ^j`.
    pub combined: Vec<i64>,
    pub holds: bool,
}

/// The coroot strings behind the strong inequality.
///
/// For each `β ∉ Δ_P` and each component `P_j` of `Δ_P` adjacent to `β`, the
/// string is the classical game on the coroot diagram started at `β^∨` with
/// only the vertices of `P_j` allowed to fire. Checks, per `β`:
/// every string end is a positive coroot of height `1 + k·h_j`, the combined
/// end `β^∨ + Σ_j γ^j` is a positive coroot, and
/// `n_β − 1 = ht(β^∨ + Σ_j γ^j) = 1 + Σ_j (ht(β^∨ + γ^j) − 1)`.
pub fn string_identity(rs: &RootSystem, delta_p: &ActiveSet) -> Result<Vec<StringCheck>> {
    let datum = parabolic_datum(rs, delta_p)?;
    let d = rs.diagram();
    let dual = d.dual();
    let n = rs.rank();
    let coroot_set: std::collections::HashSet<&[i64]> =
        rs.positive_coroots().iter().map(|r| r.coeffs.as_slice()).collect();
    let p_vertices: Vec<usize> = delta_p.iter().collect();
    let components = d.components(&p_vertices);

    let mut checks = Vec::new();
    for &(beta, n_beta) in &datum.n_beta {
        let mut ends = Vec::new();
        let mut combined = vec![0i64; n];
        combined[beta] = 1;
        let mut holds = true;
        for comp in components.iter().filter(|c| c.iter().any(|&v| d.arrows(v, beta) > 0)) {
            let adjacent: Vec<usize> = comp.iter().copied().filter(|&v| d.arrows(v, beta) > 0).collect();
            if adjacent.len() != 1 {
                return Err(Error::Consistency(format!(
                    "component {comp:?} meets β = {} in {} vertices",
                    beta + 1,
                    adjacent.len()
                )));
            }
            let a = adjacent[0];
            let k = d.arrows(a, beta);
            let sub = ActiveSet::new(n, comp.iter().copied())?;
            let h: i64 = rs.parabolic_roots(&sub).iter().map(|r| r.coeffs[a]).sum();
            let terminal = string_end(&dual, beta, comp)?;
            if !coroot_set.contains(terminal.as_slice()) {
                holds = false;
            }
            for v in comp {
                combined[*v] += terminal[*v];
            }
            let end = StringEnd { component: comp.clone(), k, h, terminal };
            if end.height() != 1 + i64::from(k) * h {
                holds = false;
            }
            ends.push(end);
        }
        let ht_sum: i64 = 1 + ends.iter().map(|e| e.height() - 1).sum::<i64>();
        let combined_height: i64 = combined.iter().sum();
        if n_beta - 1 != ht_sum || combined_height != ht_sum || !coroot_set.contains(combined.as_slice()) {
            holds = false;
        }
        checks.push(StringCheck { beta, n_beta, ends, combined, holds });
    }
    Ok(checks)
}

fn string_end(dual: &crate::root_system::DynkinDiagram, beta: usize, comp: &[usize]) -> Result<Vec<i64>> {
    let g = GameSpec::classical(dual.clone(), Configuration::basis(dual.rank(), beta))?;
    let mut c = g.start();
    for _ in 0..g.step_cap() {
        let Some(&v) = g.sad_vertices(&c).iter().find(|v| comp.contains(v)) else {
            return c
                .to_i64s()
                .ok_or_else(|| Error::Consistency("string coefficients overflow".into()));
        };
        c = fire(&c, &g, v)?;
    }
    Err(Error::Consistency("coroot string did not end".into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub diagram: String,
    /// `Δ_P` as 1-based labels, e.g. `{1,3}`.
    pub label: String,
    pub delta_p_bitmask: u64,
    pub picard: usize,
    pub dimension: usize,
    pub gcd: i64,
    pub lhs_strong: i64,
    pub lhs_mukai: i64,
    pub holds: bool,
    pub equality: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Diagrams where the root sum lemma failed.
    pub lemma_failures: Vec<String>,
}

impl SweepReport {
    pub fn violations(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| !r.holds)
    }

    pub fn equality_cases(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.equality)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "diagram,label,delta_p_bitmask,picard,dimension,gcd,lhs_strong,lhs_mukai,holds,equality\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},\"{}\",{},{},{},{},{},{},{},{}",
                r.diagram,
                r.label,
                r.delta_p_bitmask,
                r.picard,
                r.dimension,
                r.gcd,
                r.lhs_strong,
                r.lhs_mukai,
                r.holds,
                r.equality
            );
        }
        out
    }
}

pub fn datum_row(rs: &RootSystem, delta_p: &ActiveSet) -> Result<SweepRow> {
    let p = parabolic_datum(rs, delta_p)?;
    let strong = check_strong_inequality(&p);
    let mukai = check_mukai_consequence(&p)?;
    Ok(SweepRow {
        diagram: p.diagram.clone(),
        label: delta_p.to_string(),
        delta_p_bitmask: delta_p.mask(),
        picard: p.picard,
        dimension: p.dimension,
        gcd: p.index_gcd,
        lhs_strong: strong.lhs,
        lhs_mukai: mukai.lhs,
        holds: strong.holds && mukai.holds,
        equality: mukai.equality(),
    })
}

/// Every catalog diagram of rank at most `max_rank` and every proper `Δ_P`,
/// ordered by diagram and then bitmask.
pub fn sweep(max_rank: usize) -> Result<SweepReport> {
    let mut report = SweepReport::default();
    for ty in CartanType::all_up_to(max_rank) {
        let rs = RootSystem::of_type(ty);
        if !root_sum_lemma_holds(&rs) {
            report.lemma_failures.push(ty.to_string());
        }
        let n = ty.rank;
        for mask in 0..(1u64 << n) - 1 {
            report.rows.push(datum_row(&rs, &ActiveSet::from_mask(n, mask))?);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(name: &str) -> RootSystem {
        RootSystem::of_type(name.parse().unwrap())
    }

    #[test]
    fn a2_data() {
        let a2 = rs("A2");
        let p = parabolic_datum(&a2, &ActiveSet::new(2, []).unwrap()).unwrap();
        assert_eq!((p.picard, p.dimension, p.index_gcd), (2, 3, 2));
        assert_eq!(p.n_beta, vec![(0, 2), (1, 2)]);
        let s = check_strong_inequality(&p);
        assert_eq!((s.lhs, s.rhs, s.holds), (2, 3, true));
        assert_eq!(check_mukai_consequence(&p).unwrap().lhs, 2);

        let p = parabolic_datum(&a2, &ActiveSet::new(2, [1]).unwrap()).unwrap();
        assert_eq!((p.picard, p.dimension, p.index_gcd), (1, 2, 3));
        assert_eq!(p.n_beta, vec![(0, 3)]);
        assert!(check_strong_inequality(&p).equality());
        let m = check_mukai_consequence(&p).unwrap();
        assert!(m.holds && m.equality());

        assert!(parabolic_datum(&a2, &ActiveSet::all(2)).is_err());
    }

    #[test]
    fn a1_datum() {
        let p = parabolic_datum(&rs("A1"), &ActiveSet::new(1, []).unwrap()).unwrap();
        assert_eq!((p.picard, p.dimension, p.index_gcd), (1, 1, 2));
    }

    #[test]
    fn f4_all_proper_subsets_hold() {
        let f4 = rs("F4");
        for mask in 0..15 {
            let row = datum_row(&f4, &ActiveSet::from_mask(4, mask)).unwrap();
            assert!(row.holds, "{row:?}");
        }
    }

    #[test]
    fn small_sweep_and_csv() {
        let report = sweep(2).unwrap();
        assert_eq!(report.violations().count(), 0);
        assert!(report.lemma_failures.is_empty());
        let csv = report.to_csv();
        assert!(csv.starts_with("diagram,label,delta_p_bitmask"));
        assert!(csv.contains("A2,\"{2}\",2,1,2,3,2,2,true,true"));
    }

    #[test]
    fn string_identity_small_cases() {
        let a3 = rs("A3");
        let checks = string_identity(&a3, &ActiveSet::new(3, [0, 2]).unwrap()).unwrap();
        assert_eq!(checks.len(), 1);
        assert!(checks[0].holds, "{checks:?}");
        assert_eq!(checks[0].ends.len(), 2);
        assert_eq!(checks[0].combined, vec![1, 1, 1]);

        let g2 = rs("G2");
        for mask in 0..3 {
            for c in string_identity(&g2, &ActiveSet::from_mask(2, mask)).unwrap() {
                assert!(c.holds, "{c:?}");
            }
        }
    }
}
