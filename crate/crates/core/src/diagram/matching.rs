//! Hopcroft-Karp maximum bipartite matching.

use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Size of a maximum matching. `adj[u]` lists the right vertices adjacent to
/// left vertex `u`; right vertices are `0..n_right`.
pub(crate) fn maximum_matching(adj: &[Vec<usize>], n_right: usize) -> usize {
    let n_left = adj.len();
    let mut match_l = vec![FREE; n_left];
    let mut match_r = vec![FREE; n_right];
    let mut dist = vec![0usize; n_left];
    let mut size = 0;
    loop {
        // BFS layers from free left vertices
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if match_l[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == FREE {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return size;
        }
        let mut cursor = vec![0usize; n_left];
        for u in 0..n_left {
            if match_l[u] == FREE && augment(u, adj, &mut match_l, &mut match_r, &mut dist, &mut cursor) {
                size += 1;
            }
        }
    }
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
    cursor: &mut [usize],
) -> bool {
    while cursor[u] < adj[u].len() {
        let v = adj[u][cursor[u]];
        cursor[u] += 1;
        let w = match_r[v];
        if w == FREE || (dist[w] == dist[u] + 1 && augment(w, adj, match_l, match_r, dist, cursor)) {
            match_l[u] = v;
            match_r[v] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_matching_needs_augmenting_path() {
        // greedy would match 0-0 and strand 1
        let adj = vec![vec![0, 1], vec![0]];
        assert_eq!(maximum_matching(&adj, 2), 2);
    }

    #[test]
    fn deficient_graph() {
        let adj = vec![vec![0], vec![0], vec![1]];
        assert_eq!(maximum_matching(&adj, 2), 2);
        assert_eq!(maximum_matching(&[], 3), 0);
    }
}
