use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// One cell of a stabilizer shape, relative to the anchor.
///
/// `down` counts rows below the anchor row, `right` columns to the right of
/// the anchor column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub down: u8,
    pub right: i8,
}

/// A binary footprint fitting in a 3x3 window of data qubits.
///
/// The anchor is the leftmost cell of the topmost occupied row, so every
/// shape is stored in a canonical translate with the anchor at `(0, 0)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StabilizerShape {
    cells: Vec<Cell>,
}

impl StabilizerShape {
    /// Builds a shape from `(down, right)` offsets in any translate.
    pub fn from_cells(cells: &[(i32, i32)]) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidShape("shape has no cells".into()));
        }
        let top = cells.iter().map(|c| c.0).min().unwrap();
        let anchor_col = cells
            .iter()
            .filter(|c| c.0 == top)
            .map(|c| c.1)
            .min()
            .unwrap();
        let mut out: Vec<Cell> = cells
            .iter()
            .map(|&(d, r)| Cell {
                down: (d - top) as u8,
                right: (r - anchor_col) as i8,
            })
            .collect();
        out.sort();
        out.dedup();
        if out.len() != cells.len() {
            return Err(Error::InvalidShape("duplicate cells".into()));
        }
        let shape = Self { cells: out };
        if shape.span() > 3 || shape.width() > 3 {
            return Err(Error::InvalidShape(format!(
                "shape {shape} does not fit a 3x3 window"
            )));
        }
        Ok(shape)
    }

    /// Decodes a 9-bit window mask. Bit `3 * row + col` is the cell in window
    /// row `row` (0 = top) and column `col` (0 = left).
    pub fn from_mask(mask: u16) -> Result<Self> {
        if mask == 0 || mask >= 1 << 9 {
            return Err(Error::InvalidShape(format!("mask {mask:#x} out of range")));
        }
        let cells: Vec<(i32, i32)> = (0..9)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| (b / 3, b % 3))
            .collect();
        Self::from_cells(&cells)
    }

    /// Canonical 9-bit window mask (shape pushed to the top-left corner).
    pub fn mask(&self) -> u16 {
        let min_right = self.min_right();
        self.cells.iter().fold(0u16, |m, c| {
            m | 1 << (3 * c.down as i32 + (c.right as i32 - min_right)) as u16
        })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Cells other than the anchor.
    pub fn tail(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| !(c.down == 0 && c.right == 0))
    }

    pub fn weight(&self) -> usize {
        self.cells.len()
    }

    /// Number of rows spanned (`m`).
    pub fn span(&self) -> usize {
        self.cells.iter().map(|c| c.down as usize).max().unwrap_or(0) + 1
    }

    pub fn width(&self) -> usize {
        (self.max_right() - self.min_right()) as usize + 1
    }

    pub fn min_right(&self) -> i32 {
        self.cells.iter().map(|c| c.right as i32).min().unwrap_or(0)
    }

    pub fn max_right(&self) -> i32 {
        self.cells.iter().map(|c| c.right as i32).max().unwrap_or(0)
    }

    /// True iff exactly one cell sits in the topmost row ("pointed").
    pub fn is_cellular_automaton(&self) -> bool {
        self.cells.iter().filter(|c| c.down == 0).count() == 1
    }

    /// Horizontal mirror image.
    pub fn reflected(&self) -> Self {
        let cells: Vec<(i32, i32)> = self
            .cells
            .iter()
            .map(|c| (c.down as i32, -(c.right as i32)))
            .collect();
        Self::from_cells(&cells).expect("reflection preserves the window")
    }

    /// `(down, right)` pairs, convenient for serialization.
    pub fn offsets(&self) -> Vec<(i32, i32)> {
        self.cells
            .iter()
            .map(|c| (c.down as i32, c.right as i32))
            .collect()
    }

    /// All 511 non-empty shapes of the 3x3 window, by mask.
    pub fn all_window_masks() -> impl Iterator<Item = u16> {
        1u16..512
    }

    /// Pointed shapes of the given weight whose tail stays within one column
    /// of the anchor and at most two rows below it.
    pub fn pointed_candidates(weight: usize) -> Vec<StabilizerShape> {
        let slots: Vec<(i32, i32)> = (1..=2)
            .flat_map(|d| (-1..=1).map(move |r| (d, r)))
            .collect();
        let mut out = Vec::new();
        if weight == 0 || weight > slots.len() + 1 {
            return out;
        }
        for bits in 0u32..(1 << slots.len()) {
            if bits.count_ones() as usize != weight - 1 {
                continue;
            }
            let mut cells = vec![(0, 0)];
            cells.extend(
                slots
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits >> i & 1 == 1)
                    .map(|(_, &c)| c),
            );
            out.push(Self::from_cells(&cells).expect("candidate fits the window"));
        }
        out.sort();
        out
    }

    /// ASCII picture, top row first, `#` for occupied cells.
    pub fn picture(&self) -> String {
        let lo = self.min_right();
        let mut s = String::new();
        for d in 0..self.span() as u8 {
            for r in lo..=self.max_right() {
                let hit = self
                    .cells
                    .iter()
                    .any(|c| c.down == d && c.right as i32 == r);
                s.push(if hit { '#' } else { '.' });
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for StabilizerShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({},{})", c.down, c.right)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for StabilizerShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StabilizerShape{self}")
    }
}

impl Serialize for StabilizerShape {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.offsets().serialize(s)
    }
}

impl<'de> Deserialize<'de> for StabilizerShape {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let cells = Vec::<(i32, i32)>::deserialize(d)?;
        Self::from_cells(&cells).map_err(serde::de::Error::custom)
    }
}

/// The pointed T shape: one anchor above three cells in a row.
pub fn tee() -> StabilizerShape {
    StabilizerShape::from_cells(&[(0, 0), (1, -1), (1, 0), (1, 1)]).unwrap()
}

/// Vertical two-cell shape; generates repetition codes column by column.
pub fn vertical_domino() -> StabilizerShape {
    StabilizerShape::from_cells(&[(0, 0), (1, 0)]).unwrap()
}
