//! The partial duplication process on a concrete graph.
//!
//! Vertices are dense ids `0..n` in creation order and every adjacency list
//! is kept sorted. A duplicated vertex always receives id `n`, the largest id
//! so far, so appending it to its neighbours' lists preserves sortedness.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use rand_distr::Exp1;

use crate::error::{check_probability, Error, Result};

/// Simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an undirected edge list. Repeated edges (in either
    /// orientation) are merged; self-loops and out-of-range ids are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!(
                "{n} vertices exceed the id range"
            )));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for id in [u, v] {
                if id >= n {
                    return Err(Error::VertexOutOfRange { id, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }
        let mut twice = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Ok(Graph {
            adjacency,
            edge_count: twice / 2,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    /// Neighbours of `v` with a larger id.
    pub fn forward_neighbors(&self, v: usize) -> &[u32] {
        let list = &self.adjacency[v];
        let start = list.partition_point(|&w| (w as usize) <= v);
        &list[start..]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |v| {
            self.forward_neighbors(v)
                .iter()
                .map(move |&w| (v, w as usize))
        })
    }

    /// Sizes of the connected components, in order of their smallest vertex.
    pub fn component_sizes(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start);
            let mut size = 0;
            while let Some(v) = stack.pop() {
                size += 1;
                for &w in &self.adjacency[v] {
                    let w = w as usize;
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            sizes.push(size);
        }
        sizes
    }

    pub fn is_connected(&self) -> bool {
        self.component_sizes().len() <= 1
    }

    /// Proper 2-colouring if the graph is bipartite.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        let n = self.vertex_count();
        let mut color = vec![u8::MAX; n];
        let mut stack = Vec::new();
        for start in 0..n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &w in &self.adjacency[v] {
                    let w = w as usize;
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        stack.push(w);
                    } else if color[w] == color[v] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    /// True when no edge joins two vertices with the same label.
    pub fn respects_partition(&self, labels: &[usize]) -> bool {
        labels.len() == self.vertex_count() && self.edges().all(|(u, v)| labels[u] != labels[v])
    }

    /// Checks the structural invariants: symmetry, no loops, no repeated
    /// neighbours, sorted lists, dense ids and a consistent edge count.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let n = self.vertex_count();
        let mut twice = 0;
        for (v, list) in self.adjacency.iter().enumerate() {
            twice += list.len();
            for pair in list.windows(2) {
                if pair[0] >= pair[1] {
                    return Err(format!("adjacency of {v} not strictly increasing"));
                }
            }
            for &w in list {
                let w = w as usize;
                if w >= n {
                    return Err(format!("neighbour {w} of {v} out of range"));
                }
                if w == v {
                    return Err(format!("self-loop at {v}"));
                }
                if !self.has_edge(w, v) {
                    return Err(format!("edge {v}-{w} not symmetric"));
                }
            }
        }
        if twice != 2 * self.edge_count {
            return Err(format!(
                "edge count {} disagrees with degree sum {twice}",
                self.edge_count
            ));
        }
        Ok(())
    }
}

/// Description of an initial graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeedSpec {
    Complete(usize),
    Cycle(usize),
    Path(usize),
    /// Star on `m` vertices: vertex 0 joined to `1..m`.
    Star(usize),
    EdgeList {
        n: usize,
        edges: Vec<(usize, usize)>,
    },
}

impl SeedSpec {
    pub fn vertex_count(&self) -> usize {
        match *self {
            SeedSpec::Complete(m) | SeedSpec::Cycle(m) | SeedSpec::Path(m) | SeedSpec::Star(m) => m,
            SeedSpec::EdgeList { n, .. } => n,
        }
    }

    fn edges(&self) -> Result<Vec<(usize, usize)>> {
        Ok(match self {
            SeedSpec::Complete(m) => (0..*m)
                .flat_map(|u| (u + 1..*m).map(move |v| (u, v)))
                .collect(),
            SeedSpec::Cycle(m) => {
                if *m < 3 {
                    return Err(Error::InvalidParameter(format!(
                        "cycle needs 3 vertices, got {m}"
                    )));
                }
                (0..*m).map(|u| (u, (u + 1) % m)).collect()
            }
            SeedSpec::Path(m) => (1..*m).map(|u| (u - 1, u)).collect(),
            SeedSpec::Star(m) => (1..*m).map(|u| (0, u)).collect(),
            SeedSpec::EdgeList { edges, .. } => edges.clone(),
        })
    }

    /// Reads the plain-text edge-list format: a header line `n <n0>` followed
    /// by one `u v` pair per line. Blank lines and `#` comments are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("`{s}` is not a vertex id"),
                })
            };
            match (n, fields.as_slice()) {
                (None, ["n", count]) => n = Some(parse(count)?),
                (None, _) => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "expected header `n <count>`".into(),
                    })
                }
                (Some(_), [u, v]) => edges.push((parse(u)?, parse(v)?)),
                (Some(_), _) => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "expected `u v`".into(),
                    })
                }
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "missing header `n <count>`".into(),
        })?;
        Ok(SeedSpec::EdgeList { n, edges })
    }

    pub fn read_edge_list(path: &Path) -> Result<Self> {
        Self::parse_edge_list(&fs::read_to_string(path)?)
    }
}

impl fmt::Display for SeedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedSpec::Complete(m) => write!(f, "k{m}"),
            SeedSpec::Cycle(m) => write!(f, "cycle({m})"),
            SeedSpec::Path(m) => write!(f, "path({m})"),
            SeedSpec::Star(m) => write!(f, "star({m})"),
            SeedSpec::EdgeList { n, edges } => write!(f, "edges(n={n}, m={})", edges.len()),
        }
    }
}

/// Either a built-in seed name or a path to an edge-list file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeedSource {
    Builtin(SeedSpec),
    File(PathBuf),
}

impl SeedSource {
    pub fn resolve(&self) -> Result<SeedSpec> {
        match self {
            SeedSource::Builtin(spec) => Ok(spec.clone()),
            SeedSource::File(path) => {
                if !path.exists() {
                    return Err(Error::UnknownSeed(path.display().to_string()));
                }
                SeedSpec::read_edge_list(path)
            }
        }
    }
}

fn parse_builtin(name: &str) -> Option<SeedSpec> {
    let lower = name.trim().to_ascii_lowercase();
    if let Some(rest) = lower.strip_prefix('k') {
        return rest.parse().ok().map(SeedSpec::Complete);
    }
    for (prefix, make) in [
        ("complete", SeedSpec::Complete as fn(usize) -> SeedSpec),
        ("cycle", SeedSpec::Cycle),
        ("path", SeedSpec::Path),
        ("star", SeedSpec::Star),
    ] {
        if let Some(rest) = lower.strip_prefix(prefix) {
            let inner = rest.trim_start_matches(['(', ':']).trim_end_matches(')');
            return inner.parse().ok().map(make);
        }
    }
    None
}

impl FromStr for SeedSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match parse_builtin(s) {
            Some(spec) => Ok(SeedSource::Builtin(spec)),
            None if s.contains('/') || s.contains('.') => Ok(SeedSource::File(PathBuf::from(s))),
            None => Err(Error::UnknownSeed(s.to_string())),
        }
    }
}

/// Writes `g` in the edge-list format read by [`SeedSpec::parse_edge_list`].
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "n {}", g.vertex_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Builds the initial graph. Disconnected seeds are rejected unless
/// `allow_disconnected` is set.
pub fn build_seed(spec: &SeedSpec, allow_disconnected: bool) -> Result<Graph> {
    let n = spec.vertex_count();
    if n < 2 {
        return Err(Error::SeedTooSmall(n));
    }
    let g = Graph::from_edges(n, &spec.edges()?)?;
    if !allow_disconnected && !g.is_connected() {
        return Err(Error::DisconnectedSeed);
    }
    Ok(g)
}

/// Result of one duplication: the vertex that was copied and its copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Duplication {
    pub source: usize,
    pub vertex: usize,
}

/// One PDn step. The source is drawn uniformly, then each of its edges is
/// retained with probability `p`, one uniform draw per neighbour in
/// increasing id order. The copy is never joined to its source.
pub fn duplicate_step_traced<R: Rng + ?Sized>(g: &mut Graph, p: f64, rng: &mut R) -> Duplication {
    let n = g.vertex_count();
    assert!(n >= 1, "cannot duplicate in an empty graph");
    assert!(n < u32::MAX as usize, "vertex id space exhausted");
    let source = rng.random_range(0..n);
    let new_id = n as u32;
    let kept: Vec<u32> = g.adjacency[source]
        .iter()
        .copied()
        .filter(|_| rng.random::<f64>() < p)
        .collect();
    for &w in &kept {
        g.adjacency[w as usize].push(new_id);
    }
    g.edge_count += kept.len();
    g.adjacency.push(kept);
    Duplication { source, vertex: n }
}

/// One PDn step; returns the id of the new vertex.
pub fn duplicate_step<R: Rng + ?Sized>(g: &mut Graph, p: f64, rng: &mut R) -> usize {
    duplicate_step_traced(g, p, rng).vertex
}

/// Everything needed to run the discrete-time process.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub p: f64,
    pub seed: SeedSpec,
    pub allow_disconnected: bool,
    pub n_target: usize,
    /// Increasing sizes at which observers fire.
    pub checkpoints: Vec<usize>,
    pub master_seed: u64,
    pub replicate_count: usize,
}

impl ModelParams {
    /// Parameters with the default geometric checkpoint grid.
    pub fn new(p: f64, seed: SeedSpec, n_target: usize) -> Self {
        let checkpoints = geometric_checkpoints(seed.vertex_count(), n_target);
        ModelParams {
            p,
            seed,
            allow_disconnected: false,
            n_target,
            checkpoints,
            master_seed: 0,
            replicate_count: 1,
        }
    }

    pub fn n0(&self) -> usize {
        self.seed.vertex_count()
    }

    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        let n0 = self.n0();
        if n0 < 2 {
            return Err(Error::SeedTooSmall(n0));
        }
        if self.n_target < n0 {
            return Err(Error::InvalidParameter(format!(
                "target size {} below seed size {n0}",
                self.n_target
            )));
        }
        if self.replicate_count == 0 {
            return Err(Error::InvalidParameter(
                "replicate count must be at least 1".into(),
            ));
        }
        check_checkpoints(&self.checkpoints, n0 + 1, self.n_target)
    }

    pub fn build_seed(&self) -> Result<Graph> {
        build_seed(&self.seed, self.allow_disconnected)
    }
}

fn check_checkpoints(checkpoints: &[usize], lo: usize, hi: usize) -> Result<()> {
    for (i, &c) in checkpoints.iter().enumerate() {
        if c < lo || c > hi {
            return Err(Error::Checkpoint {
                checkpoint: c,
                current: lo,
                target: hi,
            });
        }
        if i > 0 && checkpoints[i - 1] >= c {
            return Err(Error::InvalidParameter(
                "checkpoints must be strictly increasing".into(),
            ));
        }
    }
    Ok(())
}

/// `{n0 * 2^j} ∩ (n0, n_target]`, with `n_target` itself always included.
pub fn geometric_checkpoints(n0: usize, n_target: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut c = n0.max(1) * 2;
    while c < n_target {
        out.push(c);
        c *= 2;
    }
    if n_target > n0 {
        out.push(n_target);
    }
    out
}

/// Grows `g` to `params.n_target` vertices, calling `observer` whenever the
/// size hits a checkpoint. Checkpoints equal to the current size fire before
/// any step is taken.
pub fn grow_to<R, F>(
    g: &mut Graph,
    params: &ModelParams,
    rng: &mut R,
    mut observer: F,
) -> Result<()>
where
    R: Rng + ?Sized,
    F: FnMut(&Graph),
{
    check_probability(params.p)?;
    let current = g.vertex_count();
    if current > params.n_target {
        return Err(Error::Checkpoint {
            checkpoint: params.n_target,
            current,
            target: params.n_target,
        });
    }
    check_checkpoints(&params.checkpoints, current, params.n_target)?;
    let mut next = params.checkpoints.iter().peekable();
    loop {
        if next.peek().is_some_and(|&&c| c == g.vertex_count()) {
            observer(g);
            next.next();
        }
        if g.vertex_count() >= params.n_target {
            break;
        }
        duplicate_step(g, params.p, rng);
    }
    Ok(())
}

/// Continuous time of a PDt run. With `n` vertices, each vertex duplicates
/// at rate `1 + 1/n`, so events arrive at total rate `n + 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PdtClock {
    pub t: f64,
}

fn waiting_time<R: Rng + ?Sized>(n: usize, rng: &mut R) -> f64 {
    let e: f64 = rng.sample(Exp1);
    e / (n as f64 + 1.0)
}

/// Advances the clock to the next event and performs it; returns the event
/// time. All vertices share the same rate, so the duplicating vertex is
/// uniform.
pub fn pdt_advance<R: Rng + ?Sized>(
    g: &mut Graph,
    clock: &mut PdtClock,
    p: f64,
    rng: &mut R,
) -> f64 {
    clock.t += waiting_time(g.vertex_count(), rng);
    duplicate_step(g, p, rng);
    clock.t
}

/// Runs PDt until `horizon`; the clock ends exactly at `horizon`. Returns
/// the number of events.
pub fn pdt_run_until<R: Rng + ?Sized>(
    g: &mut Graph,
    clock: &mut PdtClock,
    p: f64,
    horizon: f64,
    rng: &mut R,
) -> usize {
    let mut events = 0;
    while clock.t < horizon {
        let next = clock.t + waiting_time(g.vertex_count(), rng);
        if next > horizon {
            break;
        }
        clock.t = next;
        duplicate_step(g, p, rng);
        events += 1;
    }
    clock.t = clock.t.max(horizon);
    events
}
