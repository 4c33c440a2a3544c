//! Phase-flip codes on an `H x L` lattice of data qubits.
//!
//! Every parity check is a translate of a [`StabilizerShape`] placed with its
//! anchor (the topmost cell) on a lattice site. Either one shape is translated
//! over every row where it fits, or each anchor row carries its own shape.
//! Lateral boundaries are periodic or planar; planar codes may have ragged
//! rows (see [`make_planar`]).
//!
//! Rows are numbered from the bottom (row 0). Qubits are numbered in
//! column-major order, so under periodic boundaries the checks are invariant
//! under the cyclic shift of qubit indices by `H`.

mod families;
mod io;
mod shape;

pub use families::{table1_family, Table1Family, TABLE1};
pub use io::{CodeFile, write_alist};
pub use shape::{tee, vertical_domino, Cell, StabilizerShape};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix, BitVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Planar,
}

/// How shapes are assigned to anchor rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeLayout {
    /// One shape, anchored on every row where it fits inside the lattice.
    Uniform(StabilizerShape),
    /// One shape per anchor row, bottom to top; the anchor rows are the top
    /// `len` rows of the lattice.
    PerRow(Vec<StabilizerShape>),
}

/// A parity check: its anchor site and the qubit hit by each shape cell.
///
/// `slots[i]` is the qubit under cell `i` of the row's shape (in the shape's
/// sorted cell order), or `None` when the cell falls off a planar edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub anchor: (usize, i32),
    pub anchor_row_index: usize,
    pub slots: Vec<Option<usize>>,
    pub support: Vec<usize>,
}

/// Family bookkeeping for codes grown along the width direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTag {
    pub name: String,
    /// Width at which the family reaches its full distance.
    pub l_star: usize,
}

#[derive(Clone, Debug)]
pub struct LatticeCode {
    height: usize,
    width: usize,
    boundary: Boundary,
    layout: ShapeLayout,
    row_ranges: Vec<(i32, i32)>,
    anchor_rows: Vec<(usize, StabilizerShape)>,
    qubits: Vec<(usize, i32)>,
    site_table: Vec<Option<usize>>,
    col_min: i32,
    col_span: usize,
    checks: Vec<Check>,
    parity_check: BitMatrix,
    k: usize,
    family: Option<FamilyTag>,
}

/// Builds a code from `row_shapes`.
///
/// A single shape is translated over every row where it fits; a longer list
/// assigns one shape per anchor row, bottom to top, on the top rows.
pub fn build_code(
    height: usize,
    width: usize,
    row_shapes: &[StabilizerShape],
    boundary: Boundary,
) -> Result<LatticeCode> {
    match row_shapes {
        [] => Err(Error::InvalidCode("empty shape list".into())),
        [single] => LatticeCode::new(height, width, ShapeLayout::Uniform(single.clone()), boundary),
        many => LatticeCode::new(height, width, ShapeLayout::PerRow(many.to_vec()), boundary),
    }
}

impl LatticeCode {
    pub fn new(
        height: usize,
        width: usize,
        layout: ShapeLayout,
        boundary: Boundary,
    ) -> Result<Self> {
        let ranges = vec![(0, width as i32); height];
        Self::with_rows(height, width, layout, boundary, ranges)
    }

    fn with_rows(
        height: usize,
        width: usize,
        layout: ShapeLayout,
        boundary: Boundary,
        row_ranges: Vec<(i32, i32)>,
    ) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidCode(format!("empty lattice {height}x{width}")));
        }
        let anchor_rows = anchor_rows(height, &layout)?;
        let col_min = row_ranges.iter().map(|r| r.0).min().unwrap();
        let col_max = row_ranges.iter().map(|r| r.1).max().unwrap();
        let col_span = (col_max - col_min) as usize;

        // Column-major numbering.
        let mut qubits = Vec::new();
        let mut site_table = vec![None; height * col_span];
        for c in col_min..col_max {
            for (r, &(lo, hi)) in row_ranges.iter().enumerate() {
                if lo <= c && c < hi {
                    site_table[r * col_span + (c - col_min) as usize] = Some(qubits.len());
                    qubits.push((r, c));
                }
            }
        }

        let mut code = Self {
            height,
            width,
            boundary,
            layout,
            row_ranges,
            anchor_rows,
            qubits,
            site_table,
            col_min,
            col_span,
            checks: Vec::new(),
            parity_check: BitMatrix::zeros(0, 0),
            k: 0,
            family: None,
        };
        code.place_checks();
        Ok(code)
    }

    fn place_checks(&mut self) {
        let mut checks = Vec::new();
        for (ai, (row, shape)) in self.anchor_rows.iter().enumerate() {
            let (lo, hi) = self.row_ranges[*row];
            for c in lo..hi {
                let slots: Vec<Option<usize>> = shape
                    .cells()
                    .iter()
                    .map(|cell| self.site(*row as i32 - cell.down as i32, c + cell.right as i32))
                    .collect();
                let mut parity = std::collections::BTreeMap::<usize, bool>::new();
                for q in slots.iter().flatten() {
                    *parity.entry(*q).or_default() ^= true;
                }
                let support: Vec<usize> =
                    parity.into_iter().filter(|&(_, odd)| odd).map(|(q, _)| q).collect();
                if support.is_empty() {
                    continue;
                }
                checks.push(Check {
                    anchor: (*row, c),
                    anchor_row_index: ai,
                    slots,
                    support,
                });
            }
        }
        let supports: Vec<Vec<usize>> = checks.iter().map(|c| c.support.clone()).collect();
        self.parity_check = BitMatrix::from_sparse_rows(self.qubits.len(), &supports);
        self.k = self.qubits.len() - gf2::rank(&self.parity_check);
        self.checks = checks;
    }

    /// Qubit index at `(row, col)`, wrapping columns under periodic boundaries.
    pub fn site(&self, row: i32, col: i32) -> Option<usize> {
        if row < 0 || row as usize >= self.height {
            return None;
        }
        let col = match self.boundary {
            Boundary::Periodic => col.rem_euclid(self.width as i32),
            Boundary::Planar => col,
        };
        if col < self.col_min || col >= self.col_min + self.col_span as i32 {
            return None;
        }
        self.site_table[row as usize * self.col_span + (col - self.col_min) as usize]
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Width `L` of the bottom rows.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn layout(&self) -> &ShapeLayout {
        &self.layout
    }

    /// `(anchor row, shape)` pairs, bottom to top.
    pub fn anchor_rows(&self) -> &[(usize, StabilizerShape)] {
        &self.anchor_rows
    }

    /// Shapes in the per-row representation, one per anchor row.
    pub fn row_shapes(&self) -> Vec<StabilizerShape> {
        self.anchor_rows.iter().map(|(_, s)| s.clone()).collect()
    }

    /// Column range `[lo, hi)` of every row.
    pub fn row_ranges(&self) -> &[(i32, i32)] {
        &self.row_ranges
    }

    pub fn n(&self) -> usize {
        self.qubits.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn qubit_coords(&self) -> &[(usize, i32)] {
        &self.qubits
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn num_checks(&self) -> usize {
        self.checks.len()
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    /// Total number of check-to-qubit incidences (CNOTs per extraction round).
    pub fn total_check_weight(&self) -> usize {
        self.checks.iter().map(|c| c.support.len()).sum()
    }

    pub fn family(&self) -> Option<&FamilyTag> {
        self.family.as_ref()
    }

    pub fn with_family(mut self, tag: FamilyTag) -> Self {
        self.family = Some(tag);
        self
    }

    /// `L - L*` when the code belongs to a tagged family.
    pub fn family_offset(&self) -> Option<usize> {
        self.family
            .as_ref()
            .map(|f| self.width.saturating_sub(f.l_star))
    }

    /// Lowest anchor row; the rows below it are free (seed rows) in a
    /// cellular automaton code.
    pub fn first_anchor_row(&self) -> usize {
        self.anchor_rows.first().map_or(self.height, |(r, _)| *r)
    }

    /// `m` in `k = (m - 1) L`: one more than the number of seed rows.
    pub fn automaton_span(&self) -> usize {
        self.first_anchor_row() + 1
    }

    /// True iff every anchor row carries a pointed shape and every row above
    /// the seed rows is an anchor row.
    pub fn is_cellular_automaton(&self) -> bool {
        let first = self.first_anchor_row();
        self.anchor_rows.iter().all(|(_, s)| s.is_cellular_automaton())
            && self
                .anchor_rows
                .iter()
                .map(|(r, _)| *r)
                .eq(first..self.height)
    }

    fn require_ca(&self) -> Result<()> {
        if self.is_cellular_automaton() {
            Ok(())
        } else {
            Err(Error::NotCellularAutomaton(format!(
                "shapes {:?} are not all pointed",
                self.row_shapes()
            )))
        }
    }

    /// Qubits of the seed rows, in column-major order.
    pub fn seed_sites(&self) -> Vec<usize> {
        let first = self.first_anchor_row();
        (0..self.n())
            .filter(|&q| self.qubits[q].0 < first)
            .collect()
    }

    /// Expands a seed (values on the seed rows, ordered like
    /// [`seed_sites`](Self::seed_sites)) into the unique codeword agreeing
    /// with it, filling rows bottom to top with the automaton rule.
    pub fn ca_codeword_from_seed(&self, seed: &BitVector) -> Result<BitVector> {
        self.require_ca()?;
        let sites = self.seed_sites();
        if seed.len() != sites.len() {
            return Err(Error::InvalidCode(format!(
                "seed has {} bits, expected {}",
                seed.len(),
                sites.len()
            )));
        }
        let mut word = BitVector::zeros(self.n());
        for (i, &q) in sites.iter().enumerate() {
            if seed.get(i) {
                word.set(q, true);
            }
        }
        // Checks are stored row by row, bottom to top, so each anchor only
        // depends on rows already filled.
        for check in &self.checks {
            let anchor = self
                .site(check.anchor.0 as i32, check.anchor.1)
                .expect("anchor is a lattice site");
            let parity = check
                .support
                .iter()
                .filter(|&&q| q != anchor)
                .fold(false, |acc, &q| acc ^ word.get(q));
            word.set(anchor, parity);
        }
        Ok(word)
    }

    /// `k == (m - 1) L` for periodic cellular automaton codes.
    pub fn codeword_count_check(&self) -> bool {
        self.is_cellular_automaton()
            && self.k == (self.automaton_span() - 1) * self.width
    }

    /// Minimum-weight style logical basis of a cellular automaton code.
    pub fn logical_basis(&self) -> Result<LogicalBasis> {
        self.require_ca()?;
        let sites = self.seed_sites();
        let mut z_ops = Vec::with_capacity(sites.len());
        let mut x_ops = Vec::with_capacity(sites.len());
        for (i, &q) in sites.iter().enumerate() {
            let seed = BitVector::from_support(sites.len(), &[i]);
            z_ops.push(self.ca_codeword_from_seed(&seed)?);
            x_ops.push(BitVector::from_support(self.n(), &[q]));
        }
        Ok(LogicalBasis { z_ops, x_ops })
    }

    /// Information set of the code: qubits whose single-site X operators form
    /// a set of logical X representatives dual to a kernel basis.
    ///
    /// For cellular automaton codes these are the seed sites; otherwise the
    /// free columns of the reduced parity-check matrix.
    pub fn logical_x_sites(&self) -> Vec<usize> {
        if self.is_cellular_automaton() {
            self.seed_sites()
        } else {
            gf2::free_columns(&self.parity_check)
        }
    }

    /// Kernel basis (rows are codewords) dual to [`logical_x_sites`](Self::logical_x_sites).
    pub fn codeword_basis(&self) -> BitMatrix {
        if let Ok(basis) = self.logical_basis() {
            BitMatrix::from_vectors(self.n(), &basis.z_ops)
        } else {
            gf2::nullspace_basis(&self.parity_check)
        }
    }

    pub fn is_codeword(&self, word: &BitVector) -> bool {
        self.parity_check.mul_vec(word).is_zero()
    }

    /// Renders a vector on the lattice, top row first.
    pub fn render(&self, word: &BitVector) -> String {
        let mut s = String::new();
        let lo = self.col_min;
        for r in (0..self.height).rev() {
            for c in lo..lo + self.col_span as i32 {
                s.push(match self.site(r as i32, c) {
                    Some(q) if word.get(q) => '#',
                    Some(_) => '.',
                    None => ' ',
                });
            }
            s.push('\n');
        }
        s
    }
}

fn anchor_rows(height: usize, layout: &ShapeLayout) -> Result<Vec<(usize, StabilizerShape)>> {
    match layout {
        ShapeLayout::Uniform(shape) => {
            let m = shape.span();
            if m > height {
                return Err(Error::InvalidCode(format!(
                    "shape spans {m} rows but the lattice has {height}"
                )));
            }
            Ok((m - 1..height).map(|r| (r, shape.clone())).collect())
        }
        ShapeLayout::PerRow(shapes) => {
            if shapes.is_empty() {
                return Err(Error::InvalidCode("empty shape list".into()));
            }
            if shapes.len() >= height {
                return Err(Error::InvalidCode(format!(
                    "{} anchor rows do not fit a lattice of height {height}",
                    shapes.len()
                )));
            }
            let first = height - shapes.len();
            shapes
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let row = first + i;
                    if s.span() > row + 1 {
                        Err(Error::InvalidCode(format!(
                            "shape {s} anchored on row {row} leaves the lattice"
                        )))
                    } else {
                        Ok((row, s.clone()))
                    }
                })
                .collect()
        }
    }
}

/// Logical operators of a cellular automaton code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalBasis {
    /// Codeword supports grown from single-site seeds.
    pub z_ops: Vec<BitVector>,
    /// Single-site operators on the matching seed sites.
    pub x_ops: Vec<BitVector>,
}

/// Free-function form of [`StabilizerShape::is_cellular_automaton`].
pub fn is_cellular_automaton(shape: &StabilizerShape) -> bool {
    shape.is_cellular_automaton()
}

/// Removes the periodic boundary of a cellular automaton code.
///
/// The seed rows keep width `L`. Every higher row is widened to the light
/// cone of the seed region under the automaton rule, so that no codeword
/// loses support, then clipped to at most `max_extension` extra columns per
/// side when given. Checks hanging over an edge are truncated and every
/// qubit above the seed rows anchors exactly one check, so `k = (m - 1) L`.
pub fn make_planar(code: &LatticeCode, max_extension: Option<usize>) -> Result<LatticeCode> {
    code.require_ca()?;
    if code.boundary != Boundary::Periodic {
        return Err(Error::InvalidCode("code is already planar".into()));
    }
    let h = code.height;
    let l = code.width as i32;
    let first = code.first_anchor_row();
    let cap = max_extension.map(|e| e as i32);
    let mut ranges: Vec<(i32, i32)> = vec![(0, l); h];
    for (row, shape) in &code.anchor_rows {
        let (mut lo, mut hi) = (i32::MAX, i32::MIN);
        for cell in shape.tail() {
            let below = ranges[row - cell.down as usize];
            lo = lo.min(below.0 - cell.right as i32);
            hi = hi.max(below.1 - cell.right as i32);
        }
        if let Some(e) = cap {
            lo = lo.max(-e);
            hi = hi.min(l + e);
        }
        // Keep the row at least as wide as the seed region.
        ranges[*row] = (lo.min(0), hi.max(l));
    }
    debug_assert!(ranges[..first].iter().all(|&r| r == (0, l)));
    let mut planar = LatticeCode::with_rows(
        h,
        code.width,
        code.layout.clone(),
        Boundary::Planar,
        ranges,
    )?;
    planar.family = code.family.clone();
    Ok(planar)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(h: usize, l: usize) -> LatticeCode {
        build_code(h, l, &[vertical_domino()], Boundary::Periodic).unwrap()
    }

    #[test]
    fn domino_gives_repetition_codes() {
        let code = rep(5, 3);
        assert_eq!(code.n(), 15);
        assert_eq!(code.k(), 3);
        assert_eq!(code.num_checks(), 12);
        assert!(code.codeword_count_check());
    }

    #[test]
    fn column_major_numbering_is_quasi_cyclic() {
        let code = build_code(3, 5, &[tee()], Boundary::Periodic).unwrap();
        let h = code.height();
        let n = code.n();
        let shift = |q: usize| (q + h) % n;
        let rows: std::collections::HashSet<Vec<usize>> = code
            .checks()
            .iter()
            .map(|c| c.support.clone())
            .collect();
        for c in code.checks() {
            let mut s: Vec<usize> = c.support.iter().map(|&q| shift(q)).collect();
            s.sort();
            assert!(rows.contains(&s));
        }
    }

    #[test]
    fn tee_code_dimension() {
        // Fig. 2(a)-style code: m = 2 so k = L.
        let code = build_code(4, 4, &[tee()], Boundary::Periodic).unwrap();
        assert_eq!(code.k(), 4);
        assert!(code.codeword_count_check());
    }

    #[test]
    fn three_row_pointed_shape_dimension() {
        let shape = StabilizerShape::from_cells(&[(0, 0), (1, -1), (2, 0), (2, 1)]).unwrap();
        let code = build_code(5, 4, &[shape], Boundary::Periodic).unwrap();
        assert_eq!(code.automaton_span(), 3);
        assert_eq!(code.k(), 8);
        assert!(code.codeword_count_check());
    }

    #[test]
    fn seeds_expand_to_codewords() {
        let code = build_code(4, 6, &[tee()], Boundary::Periodic).unwrap();
        let sites = code.seed_sites();
        assert_eq!(sites.len(), 6);
        let zero = code
            .ca_codeword_from_seed(&BitVector::zeros(6))
            .unwrap();
        assert!(zero.is_zero());
        for s in 0u32..64 {
            let seed = BitVector::from_bools(&(0..6).map(|i| s >> i & 1 == 1).collect::<Vec<_>>());
            let w = code.ca_codeword_from_seed(&seed).unwrap();
            assert!(code.is_codeword(&w));
            for (i, &q) in sites.iter().enumerate() {
                assert_eq!(w.get(q), seed.get(i));
            }
        }
    }

    #[test]
    fn fractal_single_seed() {
        let code = build_code(3, 10, &[tee()], Boundary::Periodic).unwrap();
        let basis = code.logical_basis().unwrap();
        // Rows (bottom to top): 1, 111, 10101.
        assert_eq!(basis.z_ops[0].weight(), 7);
        let pic = code.render(&basis.z_ops[5]);
        assert_eq!(pic, "...#.#.#..\n....###...\n.....#....\n");
    }

    #[test]
    fn logical_pairing() {
        let code = build_code(4, 5, &[tee()], Boundary::Periodic).unwrap();
        let b = code.logical_basis().unwrap();
        for (i, z) in b.z_ops.iter().enumerate() {
            assert!(code.is_codeword(z));
            for (j, x) in b.x_ops.iter().enumerate() {
                assert_eq!(x.weight(), 1);
                assert_eq!(z.dot(x), i == j);
            }
        }
    }

    #[test]
    fn non_ca_rejected() {
        let flat = StabilizerShape::from_cells(&[(0, 0), (0, 1), (1, 0)]).unwrap();
        let code = build_code(4, 4, &[flat], Boundary::Periodic).unwrap();
        assert!(!code.is_cellular_automaton());
        assert!(code.logical_basis().is_err());
        assert!(code.ca_codeword_from_seed(&BitVector::zeros(4)).is_err());
    }

    #[test]
    fn build_errors() {
        assert!(build_code(3, 3, &[], Boundary::Periodic).is_err());
        let tall = StabilizerShape::from_cells(&[(0, 0), (1, 0), (2, 0)]).unwrap();
        assert!(build_code(2, 3, &[tall], Boundary::Periodic).is_err());
    }

    #[test]
    fn planar_rectangle_truncates_edges() {
        let code = build_code(3, 5, &[tee()], Boundary::Planar).unwrap();
        assert_eq!(code.n(), 15);
        assert_eq!(code.num_checks(), 10);
        let edge = code.checks().iter().find(|c| c.anchor == (1, 0)).unwrap();
        assert_eq!(edge.support.len(), 3);
        assert_eq!(edge.slots.iter().filter(|s| s.is_none()).count(), 1);
        assert_eq!(code.k(), 5);
    }

    #[test]
    fn planar_light_cone() {
        let periodic = build_code(3, 10, &[tee()], Boundary::Periodic).unwrap();
        let planar = make_planar(&periodic, None).unwrap();
        assert_eq!(planar.row_ranges(), &[(0, 10), (-1, 11), (-2, 12)]);
        assert_eq!(planar.n(), 10 + 12 + 14);
        assert_eq!(planar.k(), 10);
        assert!(planar.is_cellular_automaton());
        let clipped = make_planar(&periodic, Some(1)).unwrap();
        assert_eq!(clipped.row_ranges(), &[(0, 10), (-1, 11), (-1, 11)]);
    }
}
