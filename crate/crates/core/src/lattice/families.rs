use super::{build_code, make_planar, Boundary, FamilyTag, LatticeCode, StabilizerShape};
use crate::error::{Error, Result};

/// An optimized weight-4 cellular automaton family with one shape per row.
///
/// Members are `[n* + H l, k* + 2 l, d]` on an `H x (L* + l)` lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Table1Family {
    pub row: usize,
    pub height: usize,
    pub l_star: usize,
    pub distance: usize,
    /// `(down, right)` cells of each anchor row's shape, bottom to top.
    pub shapes: &'static [&'static [(i32, i32)]],
}

const S_LEAN_LEFT: &[(i32, i32)] = &[(0, 0), (1, -1), (2, -1), (2, 0)];
const S_STEP: &[(i32, i32)] = &[(0, 0), (1, -1), (1, 0), (2, 1)];
const S_SPLIT: &[(i32, i32)] = &[(0, 0), (1, -1), (2, -1), (2, 1)];
const S_ZIGZAG: &[(i32, i32)] = &[(0, 0), (1, -1), (1, 1), (2, 1)];
const S_ZAGZIG: &[(i32, i32)] = &[(0, 0), (1, -1), (1, 1), (2, -1)];
const S_WEDGE: &[(i32, i32)] = &[(0, 0), (1, -1), (1, 1), (2, 0)];
const S_TEE: &[(i32, i32)] = &[(0, 0), (1, -1), (1, 0), (1, 1)];
const S_TALL_TEE: &[(i32, i32)] = &[(0, 0), (2, -1), (2, 0), (2, 1)];

pub const TABLE1: [Table1Family; 5] = [
    Table1Family {
        row: 1,
        height: 4,
        l_star: 5,
        distance: 5,
        shapes: &[S_LEAN_LEFT, S_STEP],
    },
    Table1Family {
        row: 2,
        height: 5,
        l_star: 11,
        distance: 9,
        shapes: &[S_SPLIT, S_SPLIT, S_ZIGZAG],
    },
    Table1Family {
        row: 3,
        height: 6,
        l_star: 13,
        distance: 12,
        shapes: &[S_SPLIT, S_SPLIT, S_ZIGZAG, S_TEE],
    },
    Table1Family {
        row: 4,
        height: 7,
        l_star: 17,
        distance: 16,
        shapes: &[S_SPLIT, S_ZAGZIG, S_WEDGE, S_ZAGZIG, S_TEE],
    },
    Table1Family {
        row: 5,
        height: 8,
        l_star: 17,
        distance: 22,
        shapes: &[S_TALL_TEE, S_TALL_TEE, S_SPLIT, S_SPLIT, S_ZIGZAG, S_ZAGZIG],
    },
];

/// Family `row` (1 to 5) of the optimized code table.
pub fn table1_family(row: usize) -> Result<&'static Table1Family> {
    TABLE1
        .iter()
        .find(|f| f.row == row)
        .ok_or_else(|| Error::OutOfRange(format!("no family in row {row}; rows are 1 to 5")))
}

impl Table1Family {
    pub fn name(&self) -> String {
        format!("table1-row{}", self.row)
    }

    pub fn row_shapes(&self) -> Vec<StabilizerShape> {
        self.shapes
            .iter()
            .map(|cells| StabilizerShape::from_cells(cells).expect("table shapes are valid"))
            .collect()
    }

    pub fn n_star(&self) -> usize {
        self.height * self.l_star
    }

    pub fn k_star(&self) -> usize {
        2 * self.l_star
    }

    pub fn tag(&self) -> FamilyTag {
        FamilyTag { name: self.name(), l_star: self.l_star }
    }

    /// Periodic member at width `L* + ell`.
    pub fn code(&self, ell: usize) -> LatticeCode {
        build_code(
            self.height,
            self.l_star + ell,
            &self.row_shapes(),
            Boundary::Periodic,
        )
        .expect("table families build")
        .with_family(self.tag())
    }

    /// Planar member at width `L* + ell` (seed rows), light-cone widened.
    pub fn planar_code(&self, ell: usize) -> LatticeCode {
        make_planar(&self.code(ell), None).expect("table families are automaton codes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stated_parameters_at_l_star() {
        let expected = [(20, 10), (55, 22), (78, 26), (119, 34), (136, 34)];
        for (fam, (n, k)) in TABLE1.iter().zip(expected) {
            let code = fam.code(0);
            assert_eq!((code.n(), code.k()), (n, k), "{}", fam.name());
            assert!(code.codeword_count_check());
            assert!(code
                .row_shapes()
                .iter()
                .all(|s| s.weight() == 4 && s.is_cellular_automaton()));
        }
    }

    #[test]
    fn growth_in_width() {
        let fam = table1_family(1).unwrap();
        let code = fam.code(1);
        assert_eq!((code.n(), code.k()), (24, 12));
        assert_eq!(code.family_offset(), Some(1));
        assert!(table1_family(6).is_err());
    }

    #[test]
    fn planar_row5_sizes() {
        let fam = table1_family(5).unwrap();
        let base = fam.planar_code(0);
        assert_eq!((base.n(), base.k()), (165, 34));
        let big = fam.planar_code(33);
        assert_eq!((big.n(), big.k()), (429, 100));
        assert_eq!(big.n() + big.num_checks(), 758);
    }
}
