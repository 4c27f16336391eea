//! Dynkin diagrams: the standard catalog and user-supplied custom graphs.
//!
//! `arrows(u, v)` is the number of arrows pointing from `u` to `v`, which is
//! the weight `n_{v,u}` with which `u` enters the neighbour sum of `v` in the
//! game. A double arrow from a long root to a short root therefore gives
//! `arrows(long, short) = 2` and `arrows(short, long) = 1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Families of the finite crystallographic classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
    ];

    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.letter() == c.to_ascii_uppercase())
    }

    pub fn is_valid_rank(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }
}

/// A catalog entry such as `A4` or `F4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        if family.is_valid_rank(rank) {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::Classification {
                family: family.letter(),
                rank,
            })
        }
    }

    /// Every catalog type of rank at most `max_rank`, ordered by rank and then family.
    pub fn all_up_to(max_rank: usize) -> Vec<CartanType> {
        let mut out = Vec::new();
        for rank in 1..=max_rank {
            for family in Family::ALL {
                if family.is_valid_rank(rank) {
                    out.push(CartanType { family, rank });
                }
            }
        }
        out
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl std::str::FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars
            .next()
            .ok_or_else(|| Error::Parse("empty diagram type".into()))?;
        let family = Family::from_letter(letter)
            .ok_or_else(|| Error::Parse(format!("unknown diagram family {letter:?}")))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid rank in diagram type {s:?}")))?;
        CartanType::new(family, rank)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DiagramLabel {
    Catalog(CartanType),
    Custom,
}

impl fmt::Display for DiagramLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramLabel::Catalog(t) => t.fmt(f),
            DiagramLabel::Custom => f.write_str("custom"),
        }
    }
}

/// A weighted directed multigraph on the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DynkinDiagram {
    n: usize,
    arrows: Vec<u32>,
    label: DiagramLabel,
}

/// One directed multiplicity record, 1-based as in the JSON format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub from: usize,
    pub to: usize,
    pub arrows: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    pub n: usize,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub label: Option<String>,
}

impl DynkinDiagram {
    /// Builds a catalog diagram with Bourbaki numbering.
    pub fn catalog(family: Family, rank: usize) -> Result<Self> {
        let ty = CartanType::new(family, rank)?;
        let n = rank;
        let mut d = DynkinDiagram {
            n,
            arrows: vec![0; n * n],
            label: DiagramLabel::Catalog(ty),
        };
        // Vertices are 0-based here: Bourbaki vertex k is index k - 1.
        match family {
            Family::A => {
                for i in 1..n {
                    d.link(i - 1, i, 1, 1);
                }
            }
            Family::B | Family::C => {
                for i in 1..n - 1 {
                    d.link(i - 1, i, 1, 1);
                }
                if family == Family::B {
                    d.link(n - 2, n - 1, 2, 1);
                } else {
                    d.link(n - 2, n - 1, 1, 2);
                }
            }
            Family::D => {
                for i in 1..n - 1 {
                    d.link(i - 1, i, 1, 1);
                }
                d.link(n - 3, n - 1, 1, 1);
            }
            Family::E => {
                d.link(0, 2, 1, 1);
                d.link(1, 3, 1, 1);
                for i in 3..n {
                    d.link(i - 1, i, 1, 1);
                }
            }
            Family::F => {
                d.link(0, 1, 1, 1);
                d.link(1, 2, 2, 1);
                d.link(2, 3, 1, 1);
            }
            Family::G => {
                // α₁ short, α₂ long; the triple arrow points from 2 to 1.
                d.link(0, 1, 1, 3);
            }
        }
        Ok(d)
    }

    pub fn from_type(ty: CartanType) -> Self {
        Self::catalog(ty.family, ty.rank).expect("CartanType is validated on construction")
    }

    /// Builds a custom diagram from 1-based directed multiplicity records.
    ///
    /// A missing reverse record defaults to multiplicity 1. Self-loops, zero
    /// multiplicities (one-sided edges) and contradictory duplicates are rejected.
    pub fn custom(n: usize, edges: &[EdgeRecord]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDiagram("a diagram needs at least one vertex".into()));
        }
        let mut given: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for e in edges {
            if e.from == 0 || e.from > n || e.to == 0 || e.to > n {
                return Err(Error::InvalidDiagram(format!(
                    "edge {}->{} references a vertex outside 1..={n}",
                    e.from, e.to
                )));
            }
            if e.from == e.to {
                return Err(Error::InvalidDiagram(format!("self-loop at vertex {}", e.from)));
            }
            if e.arrows == 0 {
                return Err(Error::InvalidDiagram(format!(
                    "one-sided edge {}->{}: multiplicities must be at least 1",
                    e.from, e.to
                )));
            }
            let key = (e.from - 1, e.to - 1);
            if let Some(&prev) = given.get(&key) {
                if prev != e.arrows {
                    return Err(Error::InvalidDiagram(format!(
                        "conflicting multiplicities {prev} and {} for edge {}->{}",
                        e.arrows, e.from, e.to
                    )));
                }
            }
            given.insert(key, e.arrows);
        }
        let mut arrows = vec![0; n * n];
        for (&(u, v), &m) in &given {
            arrows[u * n + v] = m;
            if !given.contains_key(&(v, u)) {
                arrows[v * n + u] = 1;
            }
        }
        let mut d = DynkinDiagram {
            n,
            arrows,
            label: DiagramLabel::Custom,
        };
        // A custom graph that is literally a catalog diagram keeps its catalog name.
        if let Some(ty) = d.identify_catalog() {
            d.label = DiagramLabel::Catalog(ty);
        }
        Ok(d)
    }

    pub fn from_json(json: &DiagramJson) -> Result<Self> {
        let d = Self::custom(json.n, &json.edges)?;
        if let Some(label) = json.label.as_deref() {
            if label != "custom" {
                let ty: CartanType = label.parse()?;
                if d.label != DiagramLabel::Catalog(ty) {
                    return Err(Error::InvalidDiagram(format!(
                        "edges do not match the catalog diagram {label} in its standard numbering"
                    )));
                }
            }
        }
        Ok(d)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let json: DiagramJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&json)
    }

    pub fn to_json(&self) -> DiagramJson {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                let m = self.arrows(u, v);
                if m > 0 {
                    edges.push(EdgeRecord {
                        from: u + 1,
                        to: v + 1,
                        arrows: m,
                    });
                }
            }
        }
        DiagramJson {
            n: self.n,
            edges,
            label: Some(self.label.to_string()),
        }
    }

    fn link(&mut self, u: usize, v: usize, forward: u32, backward: u32) {
        self.arrows[u * self.n + v] = forward;
        self.arrows[v * self.n + u] = backward;
    }

    fn identify_catalog(&self) -> Option<CartanType> {
        CartanType::all_up_to(self.n)
            .into_iter()
            .filter(|t| t.rank == self.n)
            .find(|&t| Self::from_type(t).arrows == self.arrows)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &DiagramLabel {
        &self.label
    }

    pub fn cartan_type(&self) -> Option<CartanType> {
        match self.label {
            DiagramLabel::Catalog(t) => Some(t),
            DiagramLabel::Custom => None,
        }
    }

    /// Number of arrows pointing from `u` to `v` (`n_{v,u}`), 0-based.
    pub fn arrows(&self, u: usize, v: usize) -> u32 {
        self.arrows[u * self.n + v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.arrows(u, v) > 0)
    }

    /// Undirected edges `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| ((u + 1)..self.n).map(move |v| (u, v)))
            .filter(move |&(u, v)| self.arrows(u, v) > 0)
    }

    /// Every edge has multiplicities `(1, m)` or `(m, 1)` with `m ≤ 3`.
    pub fn is_crystallographic(&self) -> bool {
        self.edges().all(|(u, v)| {
            let (a, b) = (self.arrows(u, v), self.arrows(v, u));
            a.min(b) == 1 && a * b <= 3
        })
    }

    pub fn is_simply_laced(&self) -> bool {
        self.edges()
            .all(|(u, v)| self.arrows(u, v) == 1 && self.arrows(v, u) == 1)
    }

    /// The diagram of the dual root system (all arrows reversed).
    pub fn dual(&self) -> DynkinDiagram {
        let n = self.n;
        let mut arrows = vec![0; n * n];
        for u in 0..n {
            for v in 0..n {
                arrows[v * n + u] = self.arrows(u, v);
            }
        }
        let mut d = DynkinDiagram {
            n,
            arrows,
            label: DiagramLabel::Custom,
        };
        if let Some(ty) = d.identify_catalog() {
            d.label = DiagramLabel::Catalog(ty);
        }
        d
    }

    /// Induced subdiagram on `vertices` (kept in the given order).
    pub fn subdiagram(&self, vertices: &[usize]) -> DynkinDiagram {
        let m = vertices.len();
        let mut arrows = vec![0; m * m];
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate() {
                arrows[a * m + b] = self.arrows(u, v);
            }
        }
        DynkinDiagram {
            n: m,
            arrows,
            label: DiagramLabel::Custom,
        }
    }

    /// Connected components of the induced subgraph on `vertices`.
    pub fn components(&self, vertices: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let inside: Vec<bool> = (0..self.n).map(|v| vertices.contains(&v)).collect();
        let mut out = Vec::new();
        for &start in vertices {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                for u in self.neighbors(v) {
                    if inside[u] && !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Vertex order along the graph if it is a simple path, starting at the
    /// lower-numbered end.
    fn path_order(&self) -> Option<Vec<usize>> {
        if self.n == 1 {
            return Some(vec![0]);
        }
        let degrees: Vec<usize> = (0..self.n).map(|v| self.neighbors(v).count()).collect();
        if degrees.iter().any(|&d| d == 0 || d > 2) || self.edges().count() != self.n - 1 {
            return None;
        }
        let start = (0..self.n).find(|&v| degrees[v] == 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while order.len() < self.n {
            let next = self.neighbors(cur).find(|&u| u != prev)?;
            order.push(next);
            prev = cur;
            cur = next;
        }
        Some(order)
    }

    /// ASCII rendering, e.g. `o--o=>o--o` for F4. Non-path graphs list their edges.
    pub fn ascii(&self) -> String {
        fn connector(fwd: u32, back: u32) -> String {
            match (fwd, back) {
                (1, 1) => "--".to_string(),
                (2, 1) => "=>".to_string(),
                (1, 2) => "<=".to_string(),
                (3, 1) => "#>".to_string(),
                (1, 3) => "<#".to_string(),
                (f, b) => format!("-{f}:{b}-"),
            }
        }
        if let Some(order) = self.path_order() {
            let mut s = String::from("o");
            for w in order.windows(2) {
                s.push_str(&connector(self.arrows(w[0], w[1]), self.arrows(w[1], w[0])));
                s.push('o');
            }
            s
        } else {
            self.edges()
                .map(|(u, v)| {
                    format!(
                        "{}{}{}",
                        u + 1,
                        connector(self.arrows(u, v), self.arrows(v, u)),
                        v + 1
                    )
                })
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.label, self.ascii())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_is_a_single_simple_edge() {
        let d = DynkinDiagram::catalog(Family::A, 2).unwrap();
        assert_eq!(d.rank(), 2);
        assert_eq!(d.arrows(0, 1), 1);
        assert_eq!(d.arrows(1, 0), 1);
    }

    #[test]
    fn f4_double_arrow_points_long_to_short() {
        let d = DynkinDiagram::catalog(Family::F, 4).unwrap();
        assert_eq!(d.arrows(1, 2), 2);
        assert_eq!(d.arrows(2, 1), 1);
        assert_eq!(d.ascii(), "o--o=>o--o");
    }

    #[test]
    fn g2_edge_product_is_three() {
        let d = DynkinDiagram::catalog(Family::G, 2).unwrap();
        assert_eq!(d.arrows(0, 1) * d.arrows(1, 0), 3);
        assert!(d.is_crystallographic());
    }

    #[test]
    fn c_is_arrow_reverse_of_b() {
        for n in 2..7 {
            let b = DynkinDiagram::catalog(Family::B, n).unwrap();
            let c = DynkinDiagram::catalog(Family::C, n).unwrap();
            assert_eq!(b.dual().arrows, c.arrows);
        }
    }

    #[test]
    fn invalid_pairs_are_rejected() {
        for (f, r) in [
            (Family::A, 0),
            (Family::B, 1),
            (Family::D, 3),
            (Family::E, 5),
            (Family::E, 9),
            (Family::F, 3),
            (Family::G, 3),
        ] {
            assert!(matches!(
                DynkinDiagram::catalog(f, r),
                Err(Error::Classification { .. })
            ));
        }
    }

    #[test]
    fn affine_d4_star_is_accepted_but_not_catalog() {
        let edges: Vec<_> = (2..=5)
            .map(|v| EdgeRecord {
                from: 1,
                to: v,
                arrows: 1,
            })
            .collect();
        let d = DynkinDiagram::custom(5, &edges).unwrap();
        assert_eq!(d.label(), &DiagramLabel::Custom);
        assert!(d.is_crystallographic());
        assert_eq!(d.neighbors(0).count(), 4);
    }

    #[test]
    fn single_vertex_is_a1() {
        let d = DynkinDiagram::custom(1, &[]).unwrap();
        assert_eq!(d.cartan_type().map(|t| t.to_string()).as_deref(), Some("A1"));
    }

    #[test]
    fn missing_reverse_defaults_to_one() {
        let d = DynkinDiagram::custom(
            2,
            &[EdgeRecord {
                from: 1,
                to: 2,
                arrows: 1,
            }],
        )
        .unwrap();
        assert_eq!(d.arrows(1, 0), 1);
        assert_eq!(d.cartan_type().unwrap().to_string(), "A2");
    }

    #[test]
    fn self_loops_and_one_sided_edges_are_rejected() {
        let self_loop = [EdgeRecord {
            from: 1,
            to: 1,
            arrows: 1,
        }];
        assert!(DynkinDiagram::custom(2, &self_loop).is_err());
        let one_sided = [
            EdgeRecord {
                from: 1,
                to: 2,
                arrows: 1,
            },
            EdgeRecord {
                from: 2,
                to: 1,
                arrows: 0,
            },
        ];
        assert!(DynkinDiagram::custom(2, &one_sided).is_err());
    }

    #[test]
    fn heavy_edges_are_flagged_non_crystallographic() {
        let d = DynkinDiagram::custom(
            2,
            &[
                EdgeRecord {
                    from: 1,
                    to: 2,
                    arrows: 2,
                },
                EdgeRecord {
                    from: 2,
                    to: 1,
                    arrows: 2,
                },
            ],
        )
        .unwrap();
        assert!(!d.is_crystallographic());
    }

    #[test]
    fn json_roundtrip_preserves_catalog_diagrams() {
        for ty in CartanType::all_up_to(8) {
            let d = DynkinDiagram::from_type(ty);
            let text = serde_json::to_string(&d.to_json()).unwrap();
            assert_eq!(DynkinDiagram::parse_json(&text).unwrap(), d);
        }
    }

    #[test]
    fn parse_type_names() {
        assert_eq!("e6".parse::<CartanType>().unwrap().to_string(), "E6");
        assert!("D3".parse::<CartanType>().is_err());
        assert!("X2".parse::<CartanType>().is_err());
    }
}
