//! Small graph routines over adjacency lists of dense node indices.

use std::collections::VecDeque;

pub(crate) const NONE: usize = usize::MAX;

/// Tarjan's algorithm, iterative. Returns the component id of each node;
/// nodes with `include[n] == false` are skipped and get `NONE`.
pub(crate) fn strongly_connected(adjacency: &[Vec<usize>], include: &[bool]) -> Vec<usize> {
    let n = adjacency.len();
    let mut index = vec![NONE; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut component = vec![NONE; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_component = 0;

    for root in 0..n {
        if !include[root] || index[root] != NONE {
            continue;
        }
        // (node, position in its adjacency list)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&(node, pos)) = call.last() {
            if pos < adjacency[node].len() {
                let succ = adjacency[node][pos];
                call.last_mut().expect("non-empty call stack").1 += 1;
                if !include[succ] {
                    continue;
                }
                if index[succ] == NONE {
                    index[succ] = next_index;
                    low[succ] = next_index;
                    next_index += 1;
                    stack.push(succ);
                    on_stack[succ] = true;
                    call.push((succ, 0));
                } else if on_stack[succ] {
                    low[node] = low[node].min(index[succ]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[node]);
                }
                if low[node] == index[node] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        component[w] = next_component;
                        if w == node {
                            break;
                        }
                    }
                    next_component += 1;
                }
            }
        }
    }
    component
}

/// Breadth-first search from `start` following only nodes accepted by
/// `allowed`. Returns distances and, for every reached node except `start`,
/// the `(predecessor, edge position)` that first reached it.
pub(crate) fn bfs<E>(
    start: usize,
    n: usize,
    successors: impl Fn(usize) -> E,
    allowed: impl Fn(usize) -> bool,
) -> (Vec<usize>, Vec<(usize, usize)>)
where
    E: IntoIterator<Item = usize>,
{
    let mut dist = vec![NONE; n];
    let mut parent = vec![(NONE, NONE); n];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        for (pos, succ) in successors(node).into_iter().enumerate() {
            if dist[succ] == NONE && allowed(succ) {
                dist[succ] = dist[node] + 1;
                parent[succ] = (node, pos);
                queue.push_back(succ);
            }
        }
    }
    (dist, parent)
}

/// Edge positions of the BFS-tree path from the search root to `target`.
pub(crate) fn tree_path(parent: &[(usize, usize)], target: usize) -> Vec<(usize, usize)> {
    let mut path = Vec::new();
    let mut node = target;
    while parent[node].0 != NONE {
        let (pred, pos) = parent[node];
        path.push((pred, pos));
        node = pred;
    }
    path.reverse();
    path
}
