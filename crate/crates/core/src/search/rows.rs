use super::automaton::RowAutomaton;
use crate::lattice::StabilizerShape;

/// Exhaustive per-row search over `candidates`.
///
/// Walks every assignment of one candidate to each of the `height - seeds`
/// anchor rows and keeps those under which every seed in `filter` grows a
/// codeword of weight at least `min_weight`. Branches are cut as soon as a
/// filter codeword dies out (its last `max_down` rows are zero) while still
/// too light. Assignments related by a mirror image are reported once.
pub fn exhaustive_row_search(
    height: usize,
    width: usize,
    seed_rows: usize,
    candidates: &[StabilizerShape],
    filter: &[Vec<u64>],
    min_weight: u32,
) -> Vec<Vec<usize>> {
    let anchors = height - seed_rows;
    let probe = RowAutomaton::new(width, seed_rows, &[]);
    let rules: Vec<Vec<(usize, i32)>> = candidates
        .iter()
        .map(|s| s.tail().map(|c| (c.down as usize, c.right as i32)).collect())
        .collect();
    let max_down = candidates.iter().map(|s| s.span() - 1).max().unwrap_or(1).max(1);
    let mirror: Vec<usize> = candidates
        .iter()
        .map(|s| {
            let r = s.reflected();
            candidates.iter().position(|c| *c == r).unwrap_or(usize::MAX)
        })
        .collect();

    let mut state = DfsState {
        rows: filter.iter().map(|s| s.clone()).collect(),
        weights: filter
            .iter()
            .map(|s| s.iter().map(|r| r.count_ones()).sum())
            .collect(),
        choice: Vec::with_capacity(anchors),
        found: Vec::new(),
    };
    dfs(&probe, &rules, anchors, max_down, min_weight, &mirror, &mut state);
    state.found
}

struct DfsState {
    rows: Vec<Vec<u64>>,
    weights: Vec<u32>,
    choice: Vec<usize>,
    found: Vec<Vec<usize>>,
}

fn dfs(
    auto: &RowAutomaton,
    rules: &[Vec<(usize, i32)>],
    anchors: usize,
    max_down: usize,
    min_weight: u32,
    mirror: &[usize],
    st: &mut DfsState,
) {
    if st.choice.len() == anchors {
        if st.weights.iter().all(|&w| w >= min_weight) {
            let mirrored: Option<Vec<usize>> = st
                .choice
                .iter()
                .map(|&c| (mirror[c] != usize::MAX).then_some(mirror[c]))
                .collect();
            if mirrored.map_or(true, |m| st.choice <= m) {
                st.found.push(st.choice.clone());
            }
        }
        return;
    }
    'cand: for (ci, rule) in rules.iter().enumerate() {
        let depth = st.rows[0].len();
        for s in 0..st.rows.len() {
            let next = auto.step(&st.rows[s], rule);
            st.rows[s].push(next);
            st.weights[s] += next.count_ones();
            let rows = &st.rows[s];
            let dead = rows.len() >= max_down && rows[rows.len() - max_down..].iter().all(|&r| r == 0);
            if dead && st.weights[s] < min_weight {
                for t in 0..=s {
                    let r = st.rows[t].pop().unwrap();
                    st.weights[t] -= r.count_ones();
                }
                continue 'cand;
            }
        }
        debug_assert!(st.rows.iter().all(|r| r.len() == depth + 1));
        st.choice.push(ci);
        dfs(auto, rules, anchors, max_down, min_weight, mirror, st);
        st.choice.pop();
        for s in 0..st.rows.len() {
            let r = st.rows[s].pop().unwrap();
            st.weights[s] -= r.count_ones();
        }
    }
}

/// Narrows `assignments` to those passing every seed of `filter`.
pub fn filter_assignments(
    width: usize,
    seed_rows: usize,
    candidates: &[StabilizerShape],
    assignments: &[Vec<usize>],
    filter: &[Vec<u64>],
    min_weight: u32,
) -> Vec<Vec<usize>> {
    assignments
        .iter()
        .filter(|a| {
            let shapes: Vec<StabilizerShape> = a.iter().map(|&i| candidates[i].clone()).collect();
            let auto = RowAutomaton::new(width, seed_rows, &shapes);
            filter.iter().all(|s| auto.weight(s) >= min_weight)
        })
        .cloned()
        .collect()
}
