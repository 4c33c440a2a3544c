use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// A formula in conjunctive normal form with DIMACS literal conventions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new_var(&mut self) -> i32 {
        self.num_vars += 1;
        self.num_vars as i32
    }

    pub fn add(&mut self, clause: Vec<i32>) {
        self.clauses.push(clause);
    }

    /// `out <-> a xor b`.
    pub fn add_xor(&mut self, out: i32, a: i32, b: i32) {
        self.add(vec![-out, a, b]);
        self.add(vec![-out, -a, -b]);
        self.add(vec![out, -a, b]);
        self.add(vec![out, a, -b]);
    }

    /// `out <-> (cond and x)`.
    pub fn add_and(&mut self, out: i32, cond: i32, x: i32) {
        self.add(vec![-out, cond]);
        self.add(vec![-out, x]);
        self.add(vec![out, -cond, -x]);
    }

    /// Sequential counter: at most `bound` of `lits` are true.
    pub fn add_at_most(&mut self, lits: &[i32], bound: usize) {
        let n = lits.len();
        if bound >= n {
            return;
        }
        if bound == 0 {
            for &x in lits {
                self.add(vec![-x]);
            }
            return;
        }
        // s[i][j]: at least j + 1 of lits[..=i] are true.
        let mut prev: Vec<i32> = Vec::new();
        for (i, &x) in lits.iter().enumerate() {
            if i == n - 1 {
                self.add(vec![-x, -prev[bound - 1]]);
                break;
            }
            let cur: Vec<i32> = (0..bound).map(|_| self.new_var()).collect();
            self.add(vec![-x, cur[0]]);
            if i == 0 {
                for &s in &cur[1..] {
                    self.add(vec![-s]);
                }
            } else {
                for j in 0..bound {
                    self.add(vec![-prev[j], cur[j]]);
                }
                for j in 1..bound {
                    self.add(vec![-x, -prev[j - 1], cur[j]]);
                }
                self.add(vec![-x, -prev[bound - 1]]);
            }
            prev = cur;
        }
    }

    /// At least `bound` of `lits` are true.
    pub fn add_at_least(&mut self, lits: &[i32], bound: usize) {
        if bound == 0 {
            return;
        }
        if bound > lits.len() {
            self.add(Vec::new());
            return;
        }
        let negated: Vec<i32> = lits.iter().map(|&l| -l).collect();
        self.add_at_most(&negated, lits.len() - bound);
    }

    pub fn write_dimacs<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ")?;
            }
            writeln!(out, "0")?;
        }
        Ok(())
    }

    pub fn to_dimacs(&self) -> String {
        let mut buf = Vec::new();
        self.write_dimacs(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }

    pub fn parse_dimacs<R: BufRead>(input: R) -> Result<Self> {
        let mut cnf = Cnf::default();
        let mut declared: Option<(usize, usize)> = None;
        let mut current = Vec::new();
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                match parts.as_slice() {
                    ["cnf", v, c] => {
                        let v = v.parse().map_err(|_| Error::Parse(format!("bad header `{line}`")))?;
                        let c = c.parse().map_err(|_| Error::Parse(format!("bad header `{line}`")))?;
                        declared = Some((v, c));
                        cnf.num_vars = v;
                    }
                    _ => return Err(Error::Parse(format!("bad header `{line}`"))),
                }
                continue;
            }
            for tok in line.split_whitespace() {
                let lit: i32 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad literal `{tok}`")))?;
                if lit == 0 {
                    cnf.clauses.push(std::mem::take(&mut current));
                } else {
                    if lit.unsigned_abs() as usize > cnf.num_vars {
                        return Err(Error::Parse(format!("literal {lit} exceeds the header")));
                    }
                    current.push(lit);
                }
            }
        }
        if !current.is_empty() {
            cnf.clauses.push(current);
        }
        match declared {
            Some((_, c)) if c == cnf.clauses.len() => Ok(cnf),
            Some((_, c)) => Err(Error::Parse(format!(
                "header declares {c} clauses, found {}",
                cnf.clauses.len()
            ))),
            None => Err(Error::Parse("missing `p cnf` header".into())),
        }
    }

    /// True iff `model` (indexed by variable - 1) satisfies every clause.
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }
}

/// The weight query "is there a nonzero word of weight at most `d'` in the
/// row span of `G`?" with the variable maps needed to read a witness back.
#[derive(Clone, Debug)]
pub struct WeightBoundEncoding {
    pub cnf: Cnf,
    /// `b_i`: whether generator row `i` is selected.
    pub selectors: Vec<i32>,
    /// Literal equal to each codeword bit, `None` for columns that are zero
    /// in every generator.
    pub bits: Vec<Option<i32>>,
}

impl WeightBoundEncoding {
    pub fn decode(&self, model: &[bool]) -> BitVector {
        let mut word = BitVector::zeros(self.bits.len());
        for (j, lit) in self.bits.iter().enumerate() {
            if let Some(l) = lit {
                let v = model[l.unsigned_abs() as usize - 1];
                word.set(j, v == (*l > 0));
            }
        }
        word
    }
}

/// Encodes "some nonzero combination of the rows of `g` has weight at most
/// `d_prime`".
///
/// Each codeword bit is a Tseitin XOR chain over the selected generators,
/// the weight bound is a sequential counter and one clause forbids the zero
/// combination. `must_select`, when non-empty, adds the clause that at least
/// one of those generators is selected (translation symmetry breaking).
pub fn encode_weight_bound_cnf(
    g: &BitMatrix,
    d_prime: usize,
    must_select: &[usize],
) -> WeightBoundEncoding {
    let k = g.rows();
    assert!(k > 0, "empty generator matrix");
    let mut cnf = Cnf::default();
    let selectors: Vec<i32> = (0..k).map(|_| cnf.new_var()).collect();
    let gt = g.transpose();
    let mut bits = Vec::with_capacity(g.cols());
    for j in 0..g.cols() {
        let mut acc: Option<i32> = None;
        for i in gt.row_support(j) {
            let b = selectors[i];
            acc = Some(match acc {
                None => b,
                Some(a) => {
                    let t = cnf.new_var();
                    cnf.add_xor(t, a, b);
                    t
                }
            });
        }
        bits.push(acc);
    }
    let lits: Vec<i32> = bits.iter().flatten().copied().collect();
    cnf.add_at_most(&lits, d_prime);
    cnf.add(selectors.clone());
    if !must_select.is_empty() {
        cnf.add(must_select.iter().map(|&i| selectors[i]).collect());
    }
    WeightBoundEncoding { cnf, selectors, bits }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_sat(cnf: &Cnf) -> bool {
        (0u64..1 << cnf.num_vars).any(|x| {
            let model: Vec<bool> = (0..cnf.num_vars).map(|i| x >> i & 1 == 1).collect();
            cnf.is_satisfied_by(&model)
        })
    }

    #[test]
    fn cardinality_counts_exactly() {
        for n in 1..=5usize {
            for bound in 0..=n {
                let mut cnf = Cnf::default();
                let xs: Vec<i32> = (0..n).map(|_| cnf.new_var()).collect();
                cnf.add_at_most(&xs, bound);
                let aux = cnf.num_vars - n;
                // Each assignment of the xs is extendable iff its weight <= bound.
                for x in 0u32..1 << n {
                    let feasible = (0u64..1 << aux).any(|a| {
                        let mut model: Vec<bool> = (0..n).map(|i| x >> i & 1 == 1).collect();
                        model.extend((0..aux).map(|i| a >> i & 1 == 1));
                        cnf.is_satisfied_by(&model)
                    });
                    assert_eq!(feasible, x.count_ones() as usize <= bound, "n={n} b={bound} x={x:b}");
                }
            }
        }
    }

    #[test]
    fn repetition_generator_boundary() {
        let g = BitMatrix::from_rows(&[&[1, 1, 1, 1]]);
        assert!(!brute_sat(&encode_weight_bound_cnf(&g, 3, &[]).cnf));
        assert!(brute_sat(&encode_weight_bound_cnf(&g, 4, &[]).cnf));
    }

    #[test]
    fn dimacs_round_trip() {
        let g = BitMatrix::from_rows(&[&[1, 0, 1], &[0, 1, 1]]);
        let enc = encode_weight_bound_cnf(&g, 2, &[0]);
        let text = enc.cnf.to_dimacs();
        assert!(text.starts_with(&format!("p cnf {} {}\n", enc.cnf.num_vars, enc.cnf.clauses.len())));
        let back = Cnf::parse_dimacs(text.as_bytes()).unwrap();
        assert_eq!(back, enc.cnf);
        assert!(Cnf::parse_dimacs("1 2 0\n".as_bytes()).is_err());
        assert!(Cnf::parse_dimacs("p cnf 1 1\n2 0\n".as_bytes()).is_err());
    }
}
