//! Simple (loop-free, multi-arc-free) directed graphs.
//!
//! A [`Digraph`] is immutable once built. Out- and in-neighbourhoods are kept
//! as sorted adjacency lists so iteration order is deterministic, and the arc
//! set is mirrored in a hash set for constant-time arc queries.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{DigraphError, ParseError};

pub type Vertex = usize;

#[derive(Debug, Clone)]
pub struct Digraph {
    n: usize,
    out_adj: Vec<Vec<Vertex>>,
    in_adj: Vec<Vec<Vertex>>,
    arc_set: HashSet<(Vertex, Vertex)>,
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.out_adj == other.out_adj
    }
}

impl Eq for Digraph {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub out_degrees: Vec<usize>,
    pub in_degrees: Vec<usize>,
}

impl Digraph {
    /// Builds a digraph on vertices `0..n`, rejecting self-loops, repeated
    /// arcs and endpoints outside the vertex range.
    pub fn new<I>(n: usize, arcs: I) -> Result<Self, DigraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut arc_set = HashSet::new();
        for (u, v) in arcs {
            for w in [u, v] {
                if w >= n {
                    return Err(DigraphError::EndpointOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(DigraphError::SelfLoop(u));
            }
            if !arc_set.insert((u, v)) {
                return Err(DigraphError::DuplicateArc(u, v));
            }
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
        }
        Ok(Self {
            n,
            out_adj,
            in_adj,
            arc_set,
        })
    }

    /// The digraph on `n` vertices with no arcs.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            arc_set: HashSet::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.arc_set.len()
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.arc_set.contains(&(u, v))
    }

    pub fn out_neighbors(&self, u: Vertex) -> &[Vertex] {
        &self.out_adj[u]
    }

    pub fn in_neighbors(&self, u: Vertex) -> &[Vertex] {
        &self.in_adj[u]
    }

    pub fn out_degree(&self, u: Vertex) -> usize {
        self.out_adj[u].len()
    }

    pub fn in_degree(&self, u: Vertex) -> usize {
        self.in_adj[u].len()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        DegreeProfile {
            out_degrees: self.out_adj.iter().map(Vec::len).collect(),
            in_degrees: self.in_adj.iter().map(Vec::len).collect(),
        }
    }

    /// First out-degree Zagreb index, the sum of squared out-degrees.
    pub fn zagreb_index(&self) -> u64 {
        self.out_adj
            .iter()
            .map(|outs| {
                let d = outs.len() as u64;
                d * d
            })
            .sum()
    }

    /// Number of closed walks of length two: each digon contributes two.
    pub fn closed_walks_2(&self) -> u64 {
        self.arcs().filter(|&(u, v)| self.has_arc(v, u)).count() as u64
    }

    pub fn is_symmetric(&self) -> bool {
        self.arcs().all(|(u, v)| self.has_arc(v, u))
    }

    pub fn is_out_regular(&self) -> bool {
        match self.out_adj.first() {
            None => true,
            Some(first) => self.out_adj.iter().all(|o| o.len() == first.len()),
        }
    }

    /// Every vertex has equal in- and out-degree.
    pub fn is_balanced(&self) -> bool {
        (0..self.n).all(|u| self.out_degree(u) == self.in_degree(u))
    }

    pub fn is_dag(&self) -> bool {
        self.strong_components().iter().all(|c| c.len() == 1)
    }

    /// Returns `(|N+(u) ∩ N+(v)|, |N-(u) ∩ N-(v)|)` for distinct `u`, `v`.
    pub fn common_neighbors(&self, u: Vertex, v: Vertex) -> Result<(usize, usize), DigraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(DigraphError::EndpointOutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(DigraphError::SameVertex(u));
        }
        Ok((
            sorted_intersection_len(&self.out_adj[u], &self.out_adj[v]),
            sorted_intersection_len(&self.in_adj[u], &self.in_adj[v]),
        ))
    }

    /// Strongly connected components via Tarjan's algorithm.
    ///
    /// Components come out in reverse topological order of the condensation:
    /// every arc joining two different components runs from a component listed
    /// later to one listed earlier (sink components first). Vertices inside a
    /// component are sorted ascending.
    pub fn strong_components(&self) -> Vec<Vec<Vertex>> {
        const UNVISITED: usize = usize::MAX;
        let n = self.n;
        let mut index = vec![UNVISITED; n];
        let mut lowlink = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut components = Vec::new();
        let mut next_index = 0;
        // (vertex, position in its out-list)
        let mut call_stack: Vec<(Vertex, usize)> = Vec::new();

        for root in 0..n {
            if index[root] != UNVISITED {
                continue;
            }
            call_stack.push((root, 0));
            while let Some(&mut (v, ref mut pos)) = call_stack.last_mut() {
                if *pos == 0 && index[v] == UNVISITED {
                    index[v] = next_index;
                    lowlink[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                if let Some(&w) = self.out_adj[v].get(*pos) {
                    *pos += 1;
                    if index[w] == UNVISITED {
                        call_stack.push((w, 0));
                    } else if on_stack[w] {
                        lowlink[v] = lowlink[v].min(index[w]);
                    }
                    continue;
                }
                call_stack.pop();
                if let Some(&(parent, _)) = call_stack.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        component.push(w);
                        if w == v {
                            break;
                        }
                    }
                    component.sort_unstable();
                    components.push(component);
                }
            }
        }
        components
    }

    /// Induced subdigraph on `vertices`, relabelled `0..vertices.len()` in the
    /// given order.
    pub fn induced(&self, vertices: &[Vertex]) -> Digraph {
        let mut position = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            position[v] = i;
        }
        let arcs = vertices.iter().flat_map(|&u| {
            let position = &position;
            self.out_adj[u]
                .iter()
                .filter(move |&&v| position[v] != usize::MAX)
                .map(move |&v| (position[u], position[v]))
        });
        Digraph::new(vertices.len(), arcs.collect::<Vec<_>>())
            .expect("induced subgraph of a valid digraph is valid")
    }

    /// Parses the edge-list text format: a header `n m` followed by `m` lines
    /// `u v` of 0-indexed vertices. Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (header_line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
        let (n, m) = parse_pair(header_line, header)?;

        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut arc_set = HashSet::with_capacity(m);
        for (line, content) in lines {
            let (u, v) = parse_pair(line, content)?;
            for w in [u, v] {
                if w >= n {
                    return Err(ParseError::EndpointOutOfRange { line, vertex: w, n });
                }
            }
            if u == v {
                return Err(ParseError::SelfLoop { line, vertex: u });
            }
            if !arc_set.insert((u, v)) {
                return Err(ParseError::DuplicateArc { line, u, v });
            }
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        if arc_set.len() != m {
            return Err(ParseError::ArcCountMismatch {
                expected: m,
                found: arc_set.len(),
            });
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
        }
        Ok(Self {
            n,
            out_adj,
            in_adj,
            arc_set,
        })
    }

    /// Writes the edge-list format with arcs in lexicographic order.
    pub fn serialize(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.size());
        for (u, v) in self.arcs() {
            writeln!(out, "{u} {v}").expect("writing to a String cannot fail");
        }
        out
    }
}

fn parse_pair(line: usize, content: &str) -> Result<(usize, usize), ParseError> {
    let malformed = || ParseError::Malformed {
        line,
        content: content.to_string(),
    };
    let mut fields = content.split_whitespace();
    let a = fields
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(malformed)?;
    let b = fields
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(malformed)?;
    if fields.next().is_some() {
        return Err(malformed());
    }
    Ok((a, b))
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}
