use crate::lattice::{Boundary, LatticeCode, StabilizerShape};

/// Bit-parallel evaluator for periodic cellular automaton codes of width at
/// most 64: every lattice row is one `u64`, bit `c` holding column `c`.
#[derive(Clone, Debug)]
pub struct RowAutomaton {
    width: usize,
    mask: u64,
    seed_rows: usize,
    /// Per anchor row (bottom to top): `(down, right)` of each tail cell.
    rules: Vec<Vec<(usize, i32)>>,
}

impl RowAutomaton {
    pub fn new(width: usize, seed_rows: usize, shapes: &[StabilizerShape]) -> Self {
        assert!((1..=64).contains(&width), "width {width} does not fit a machine word");
        let rules = shapes
            .iter()
            .map(|s| {
                assert!(s.is_cellular_automaton(), "shape {s} is not pointed");
                s.tail().map(|c| (c.down as usize, c.right as i32)).collect()
            })
            .collect();
        let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        Self { width, mask, seed_rows, rules }
    }

    /// The evaluator of a periodic cellular automaton code, if it fits.
    pub fn from_code(code: &LatticeCode) -> Option<Self> {
        (code.boundary() == Boundary::Periodic
            && code.is_cellular_automaton()
            && code.width() <= 64)
            .then(|| Self::new(code.width(), code.first_anchor_row(), &code.row_shapes()))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn seed_rows(&self) -> usize {
        self.seed_rows
    }

    pub fn height(&self) -> usize {
        self.seed_rows + self.rules.len()
    }

    /// Row whose column `c` is column `c + right` of `x`.
    #[inline]
    pub fn shift(&self, x: u64, right: i32) -> u64 {
        let l = self.width as u32;
        let s = right.rem_euclid(self.width as i32) as u32;
        if s == 0 {
            x
        } else {
            ((x >> s) | (x << (l - s))) & self.mask
        }
    }

    /// Next row produced by the rule `rule` from the rows built so far.
    #[inline]
    pub fn step(&self, rows: &[u64], rule: &[(usize, i32)]) -> u64 {
        let top = rows.len();
        rule.iter()
            .fold(0, |acc, &(down, right)| acc ^ self.shift(rows[top - down], right))
    }

    /// All rows of the codeword grown from `seed` (bottom rows first).
    pub fn evolve(&self, seed: &[u64]) -> Vec<u64> {
        assert_eq!(seed.len(), self.seed_rows);
        let mut rows = seed.to_vec();
        for rule in &self.rules {
            let next = self.step(&rows, rule);
            rows.push(next);
        }
        rows
    }

    pub fn weight(&self, seed: &[u64]) -> u32 {
        self.evolve(seed).iter().map(|r| r.count_ones()).sum()
    }

    /// Minimum codeword weight over a set of seeds.
    pub fn min_weight<'a>(&self, seeds: impl IntoIterator<Item = &'a Vec<u64>>) -> u32 {
        seeds.into_iter().map(|s| self.weight(s)).min().unwrap_or(u32::MAX)
    }

    /// Exact minimum distance by Gray-code enumeration of all `2^((m-1) L)`
    /// seeds. Returns the distance and a minimising seed.
    pub fn exact_distance(&self) -> (u32, Vec<u64>) {
        let k = self.seed_rows * self.width;
        assert!(k < 64);
        // Codeword of each single-bit seed, packed row-wise into words.
        let h = self.height();
        let basis: Vec<Vec<u64>> = (0..k)
            .map(|i| {
                let mut seed = vec![0u64; self.seed_rows];
                seed[i / self.width] = 1 << (i % self.width);
                self.evolve(&seed)
            })
            .collect();
        let packed = pack_rows(&basis, self.width, h);
        let generators = crate::gf2::BitMatrix::from_sparse_rows(
            packed.cols,
            &packed.supports,
        );
        let (d, combo) = crate::distance::min_weight_bruteforce(&generators).expect("k > 0");
        let mut seed = vec![0u64; self.seed_rows];
        for i in 0..k {
            if combo >> i & 1 == 1 {
                seed[i / self.width] ^= 1 << (i % self.width);
            }
        }
        (d as u32, seed)
    }
}

struct Packed {
    cols: usize,
    supports: Vec<Vec<usize>>,
}

fn pack_rows(words: &[Vec<u64>], width: usize, height: usize) -> Packed {
    let supports = words
        .iter()
        .map(|rows| {
            rows.iter()
                .enumerate()
                .flat_map(|(r, &x)| {
                    (0..width).filter(move |c| x >> c & 1 == 1).map(move |c| r * width + c)
                })
                .collect()
        })
        .collect();
    Packed { cols: width * height, supports }
}

/// Seeds supported on columns `0..window` that are nonzero in column 0.
///
/// Under periodic boundaries every nonzero seed of width at most `window`
/// is a translate of one of these.
pub fn windowed_seeds(seed_rows: usize, width: usize, window: usize) -> Vec<Vec<u64>> {
    let window = window.min(width);
    let bits = seed_rows * window;
    let mut out = Vec::new();
    for x in 1u64..1 << bits {
        let mut seed = vec![0u64; seed_rows];
        for b in 0..bits {
            if x >> b & 1 == 1 {
                let (row, col) = (b % seed_rows, b / seed_rows);
                seed[row] |= 1 << col;
            }
        }
        if seed.iter().any(|r| r & 1 == 1) {
            out.push(seed);
        }
    }
    out
}
