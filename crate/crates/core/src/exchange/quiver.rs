use std::collections::VecDeque;

use super::matrix::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    /// `b_{to,from}`, always positive.
    pub weight: i32,
}

/// Valued quiver of a square matrix: an arrow `i -> j` whenever `b_ji > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    n: usize,
    arrows: Vec<Arrow>,
    // adjacency[i][j] == true iff i -> j
    adjacency: Vec<Vec<bool>>,
}

impl Quiver {
    pub fn new(n: usize, arrows: Vec<Arrow>) -> Self {
        let mut adjacency = vec![vec![false; n]; n];
        for a in &arrows {
            adjacency[a.from][a.to] = true;
        }
        Quiver {
            n,
            arrows,
            adjacency,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn has_arrow(&self, from: usize, to: usize) -> bool {
        self.adjacency[from][to]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j] || self.adjacency[j][i]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.adjacent(i, j))
    }

    pub fn is_sink(&self, k: usize) -> bool {
        (0..self.n).all(|j| !self.adjacency[k][j])
    }

    pub fn is_source(&self, k: usize) -> bool {
        (0..self.n).all(|j| !self.adjacency[j][k])
    }

    /// Kahn's algorithm.
    pub fn is_acyclic(&self) -> bool {
        let mut indegree = vec![0usize; self.n];
        for a in &self.arrows {
            indegree[a.to] += 1;
        }
        let mut queue: VecDeque<usize> = (0..self.n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop_front() {
            seen += 1;
            for a in self.arrows.iter().filter(|a| a.from == v) {
                indegree[a.to] -= 1;
                if indegree[a.to] == 0 {
                    queue.push_back(a.to);
                }
            }
        }
        seen == self.n
    }

    /// Connected components of the subgraph induced on `vertices`, ignoring
    /// orientation. Components come out sorted by smallest vertex.
    pub fn induced_components(&self, vertices: &[usize]) -> Vec<Vec<usize>> {
        let mut inside = vec![false; self.n];
        for &v in vertices {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        for &start in &sorted {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if inside[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

pub fn quiver_of(b: &IntMatrix) -> Quiver {
    let n = b.cols();
    let mut arrows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let w = b.get(j, i);
            if w > 0 {
                arrows.push(Arrow {
                    from: i,
                    to: j,
                    weight: w,
                });
            }
        }
    }
    Quiver::new(n, arrows)
}

pub fn is_acyclic(q: &Quiver) -> bool {
    q.is_acyclic()
}
