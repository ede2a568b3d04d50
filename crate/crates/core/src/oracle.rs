//! Literal saturation check used to cross-validate [`crate::graph::is_n_saturated`].
//!
//! Deliberately naive: it copies the adjacency relation into a boolean
//! matrix, walks every subset of every size below `n` and every type over it,
//! and tests every candidate vertex one by one. Nothing here is shared with
//! the word-parallel checker.

use crate::graph::FiniteGraph;

pub fn oracle_is_n_saturated(g: &FiniteGraph, n: usize) -> bool {
    let order = g.order();
    let adj: Vec<Vec<bool>> = (0..order)
        .map(|a| {
            (0..order)
                .map(|b| g.adjacent(a, b).expect("indices in range"))
                .collect()
        })
        .collect();

    for size in 0..n {
        if size > order {
            break;
        }
        let mut subsets = Vec::new();
        collect_subsets(order, size, 0, &mut Vec::new(), &mut subsets);
        for a in &subsets {
            for f in 0..(1usize << size) {
                let realized = (0..order).any(|x| {
                    !a.contains(&x)
                        && a.iter()
                            .enumerate()
                            .all(|(j, &v)| adj[x][v] == ((f >> j) & 1 == 1))
                });
                if !realized {
                    return false;
                }
            }
        }
    }
    true
}

fn collect_subsets(
    order: usize,
    size: usize,
    start: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for v in start..order {
        cur.push(v);
        collect_subsets(order, size, v + 1, cur, out);
        cur.pop();
    }
}
