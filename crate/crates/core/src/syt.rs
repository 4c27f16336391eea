//! Type-A single-source games and standard Young tableaux.
//!
//! On `A_{n−1}` with source `k`, the reachable configurations are the
//! Grassmannian permutations of `S_n` with descent at `k`, and every legal
//! move sequence is a standard filling of the permutation's shape: move `j`
//! firing vertex `i_j` goes into the addable cell of content `i_j − k`.
//!
//! Vertices are 0-based in this API, so `k` and the moves are shifted by one
//! from the usual labels. Contents `i_j − k` are unaffected by the shift.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{replay, GameSpec};
use crate::root_system::{ActiveSet, DynkinDiagram, Family};

/// A partition, stored without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct YoungShape(Vec<usize>);

impl YoungShape {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(YoungShape(parts))
    }

    pub fn empty() -> Self {
        YoungShape(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.0.len()
    }

    pub fn fits(&self, rows: usize, cols: usize) -> bool {
        self.0.len() <= rows && self.0.first().is_none_or(|&c| c <= cols)
    }

    /// Cells `(r, c)`, 1-based, that can be added keeping a partition.
    pub fn addable_cells(&self) -> Vec<(usize, usize)> {
        let mut cells = Vec::new();
        for (i, &len) in self.0.iter().enumerate() {
            if i == 0 || self.0[i - 1] > len {
                cells.push((i + 1, len + 1));
            }
        }
        cells.push((self.0.len() + 1, 1));
        cells
    }

    fn add(&mut self, row: usize) {
        if row > self.0.len() {
            self.0.push(1);
        } else {
            self.0[row - 1] += 1;
        }
    }

    fn hook(&self, r: usize, c: usize) -> usize {
        let arm = self.0[r] - c - 1;
        let leg = self.0[r + 1..].iter().filter(|&&len| len > c).count();
        arm + leg + 1
    }
}

impl TryFrom<Vec<usize>> for YoungShape {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<YoungShape> for Vec<usize> {
    fn from(s: YoungShape) -> Self {
        s.0
    }
}

impl fmt::Display for YoungShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// |SYT(shape)| by the hook length formula.
pub fn count_syt(shape: &YoungShape) -> BigUint {
    let mut num = BigUint::from(1u32);
    for m in 2..=shape.size() {
        num *= m;
    }
    let mut den = BigUint::from(1u32);
    for (r, &len) in shape.0.iter().enumerate() {
        for c in 0..len {
            den *= shape.hook(r, c);
        }
    }
    num / den
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TableauJson", into = "TableauJson")]
pub struct StandardTableau {
    shape: YoungShape,
    rows: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableauJson {
    shape: Vec<usize>,
    rows: Vec<Vec<usize>>,
}

impl TryFrom<TableauJson> for StandardTableau {
    type Error = Error;
    fn try_from(j: TableauJson) -> Result<Self> {
        let t = StandardTableau::new(j.rows)?;
        if t.shape.0 != j.shape {
            return Err(Error::Domain("shape does not match the rows".into()));
        }
        Ok(t)
    }
}

impl From<StandardTableau> for TableauJson {
    fn from(t: StandardTableau) -> Self {
        TableauJson {
            shape: t.shape.0,
            rows: t.rows,
        }
    }
}

impl StandardTableau {
    /// Validates a filling of `1..=m` increasing along rows and columns.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = YoungShape::new(rows.iter().map(Vec::len).collect())?;
        if rows.iter().any(Vec::is_empty) {
            return Err(Error::Domain("tableau rows must be nonempty".into()));
        }
        let m = shape.size();
        let mut seen = vec![false; m + 1];
        for &x in rows.iter().flatten() {
            if x == 0 || x > m || seen[x] {
                return Err(Error::Domain(format!("entries must be 1..={m}, each once")));
            }
            seen[x] = true;
        }
        for (r, row) in rows.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                if c > 0 && row[c - 1] >= x {
                    return Err(Error::Domain(format!("row {} does not increase", r + 1)));
                }
                if r > 0 && rows[r - 1][c] >= x {
                    return Err(Error::Domain(format!("column {} does not increase", c + 1)));
                }
            }
        }
        Ok(StandardTableau { shape, rows })
    }

    pub fn shape(&self) -> &YoungShape {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Aligned text grid, one row per line.
    pub fn to_grid(&self) -> String {
        let width = self.shape.size().to_string().len();
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| format!("{x:>width$}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_grid())
    }
}

/// A permutation of `{1..n}` in one-line notation, increasing on positions
/// `1..=k` and on `k+1..=n` (here `k` is the 1-based source label).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GrassmannianPermutation {
    k: usize,
    one_line: Vec<usize>,
}

impl GrassmannianPermutation {
    /// `k` is the 1-based number of entries in the first block.
    pub fn new(k: usize, one_line: Vec<usize>) -> Result<Self> {
        let n = one_line.len();
        let mut seen = vec![false; n + 1];
        for &x in &one_line {
            if x == 0 || x > n || seen[x] {
                return Err(Error::Domain(format!("{one_line:?} is not a permutation")));
            }
            seen[x] = true;
        }
        if k == 0 || k >= n {
            return Err(Error::Domain(format!("block size {k} must lie in 1..{n}")));
        }
        let increasing = |s: &[usize]| s.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&one_line[..k]) || !increasing(&one_line[k..]) {
            return Err(Error::Domain(format!(
                "{one_line:?} is not Grassmannian with descent at {k}"
            )));
        }
        Ok(GrassmannianPermutation { k, one_line })
    }

    /// `s_{i_t} ∘ ⋯ ∘ s_{i_1}` for 0-based moves, with `s_i` swapping the values `i+1, i+2`.
    pub fn from_moves(n: usize, source: usize, moves: &[usize]) -> Result<Self> {
        let mut one_line: Vec<usize> = (1..=n).collect();
        for &i in moves {
            if i + 1 >= n {
                return Err(Error::VertexOutOfRange { vertex: i, n: n - 1 });
            }
            for x in one_line.iter_mut() {
                if *x == i + 1 {
                    *x = i + 2;
                } else if *x == i + 2 {
                    *x = i + 1;
                }
            }
        }
        Self::new(source + 1, one_line)
    }

    /// All Grassmannian permutations of `S_n` with descent at the 1-based `k`,
    /// in lexicographic order of their first block.
    pub fn all(n: usize, k: usize) -> Vec<GrassmannianPermutation> {
        let mut out = Vec::new();
        let mut first: Vec<usize> = (1..=k).collect();
        loop {
            let mut one_line = first.clone();
            one_line.extend((1..=n).filter(|x| !first.contains(x)));
            out.push(GrassmannianPermutation { k, one_line });
            // Next k-subset in lexicographic order.
            let Some(i) = (0..k).rev().find(|&i| first[i] < n - k + i + 1) else {
                break;
            };
            first[i] += 1;
            for j in i + 1..k {
                first[j] = first[j - 1] + 1;
            }
        }
        out
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn one_line(&self) -> &[usize] {
        &self.one_line
    }

    /// Number of inversions, which is the Coxeter length.
    pub fn length(&self) -> usize {
        let w = &self.one_line;
        (0..w.len())
            .map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count())
            .sum()
    }
}

/// `λ_i = w(k+1−i) − (k+1−i)`; its size must equal the length of `w`.
pub fn shape_of(w: &GrassmannianPermutation) -> Result<YoungShape> {
    let k = w.k;
    let parts: Vec<usize> = (1..=k).map(|i| w.one_line[k - i] - (k + 1 - i)).collect();
    let shape = YoungShape::new(parts)?;
    if shape.size() != w.length() {
        return Err(Error::Consistency(format!(
            "shape {shape} has {} boxes but the permutation has length {}",
            shape.size(),
            w.length()
        )));
    }
    Ok(shape)
}

/// The modified game on `A_{n−1}` with the single source `k` (0-based).
pub fn type_a_game(n: usize, source: usize) -> Result<GameSpec> {
    if n < 2 {
        return Err(Error::Domain("type A games need n ≥ 2".into()));
    }
    let d = DynkinDiagram::catalog(Family::A, n - 1)?;
    GameSpec::modified(d, ActiveSet::new(n - 1, [source])?)
}

/// Places move `j` in the unique addable cell of content `i_j − k`.
///
/// Works on any legal prefix, so a game in progress has a partial tableau.
pub fn fill_tableau(moves: &[usize], n: usize, source: usize) -> Result<StandardTableau> {
    let g = type_a_game(n, source)?;
    replay(&g, moves).map_err(|e| Error::Domain(format!("not a legal game sequence: {e}")))?;
    let mut shape = YoungShape::empty();
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for (j, &i) in moves.iter().enumerate() {
        let content = i as i64 - source as i64;
        let cells: Vec<(usize, usize)> = shape
            .addable_cells()
            .into_iter()
            .filter(|&(r, c)| c as i64 - r as i64 == content)
            .collect();
        let &[(r, _)] = cells.as_slice() else {
            return Err(Error::Consistency(format!(
                "step {}: {} addable cells of content {content}",
                j + 1,
                cells.len()
            )));
        };
        shape.add(r);
        if r > rows.len() {
            rows.push(Vec::new());
        }
        rows[r - 1].push(j + 1);
    }
    let t = StandardTableau::new(rows)?;
    let w = GrassmannianPermutation::from_moves(n, source, moves)?;
    if &shape_of(&w)? != t.shape() {
        return Err(Error::Consistency(format!(
            "filled shape {} differs from the permutation's shape",
            t.shape()
        )));
    }
    Ok(t)
}

/// Inverse of [`fill_tableau`]: peel the largest entry, emitting `i = k + c − r`.
pub fn sequence_of_tableau(t: &StandardTableau, n: usize, source: usize) -> Result<Vec<usize>> {
    if source + 1 >= n {
        return Err(Error::Domain(format!("source {} out of range for n = {n}", source + 1)));
    }
    let k = source + 1;
    if !t.shape().fits(k, n - k) {
        return Err(Error::Domain(format!(
            "shape {} does not fit in a {k}×{} rectangle",
            t.shape(),
            n - k
        )));
    }
    let mut position = vec![(0i64, 0i64); t.shape().size() + 1];
    let source = source as i64;
    for (r, row) in t.rows().iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            position[x] = (r as i64 + 1, c as i64 + 1);
        }
    }
    let mut moves: Vec<usize> = (1..position.len())
        .rev()
        .map(|m| {
            let (r, c) = position[m];
            // 1-based: k + c − r; shifting to 0-based gives source + c − r.
            (source + c - r) as usize
        })
        .collect();
    moves.reverse();
    Ok(moves)
}
