//! Measurements on diagrams: reducedness, isoperimetry, depth, cuts and the
//! way faces meet the boundary.

use std::collections::VecDeque;

use num_rational::Ratio;

use super::{Diagram, DiagramError};
use crate::rounding::ceil_len;

/// Whether the faces on both sides of interior half-edge `h` are mirror
/// images across it: reading the face of `h` forward from `h` gives the
/// inverse letters of reading the other face backward from the twin.
fn cancellable_across(d: &Diagram, prev: &[usize], h: usize) -> bool {
    let Some(t) = d.half_edges[h].twin else { return false };
    let (mut a, mut b) = (h, t);
    for _ in 0..d.ell() {
        if d.half_edges[a].label != d.half_edges[b].label.inverse() {
            return false;
        }
        a = d.half_edges[a].next;
        b = prev[b];
    }
    true
}

pub(crate) fn first_cancellable_among(d: &Diagram, candidates: impl IntoIterator<Item = usize>) -> Option<usize> {
    let prev = d.prev_table();
    candidates.into_iter().find(|&h| cancellable_across(d, &prev, h))
}

/// No interior edge separates a face from its mirror copy.
pub fn is_reduced_diagram(d: &Diagram) -> bool {
    first_cancellable_among(d, 0..d.half_edges.len()).is_none()
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsoperimetryReport {
    pub faces: usize,
    pub boundary: usize,
    pub ell: usize,
    /// `|∂D| / (ℓ|D|)`, exact.
    pub ratio: Ratio<u64>,
    /// `1 − 2d − ε`.
    pub threshold: f64,
    /// `⌈(1 − 2d − ε)ℓ|D|⌉`.
    pub required: usize,
    pub holds: bool,
}

impl IsoperimetryReport {
    pub fn ratio_f64(&self) -> f64 {
        *self.ratio.numer() as f64 / *self.ratio.denom() as f64
    }
}

/// `|∂D| ≥ ⌈(1 − 2d − ε)ℓ|D|⌉`.
pub fn isoperimetric_check(d: &Diagram, density: f64, eps: f64) -> IsoperimetryReport {
    let faces = d.face_count();
    let boundary = d.boundary_length();
    let ell = d.ell();
    let threshold = 1.0 - 2.0 * density - eps;
    let required = ceil_len(threshold * (ell * faces) as f64);
    IsoperimetryReport {
        faces,
        boundary,
        ell,
        ratio: Ratio::new(boundary as u64, (ell * faces) as u64),
        threshold,
        required,
        holds: boundary >= required,
    }
}

/// Distance of every face to the boundary: 1 for faces with a boundary
/// edge, then breadth-first across shared edges.
pub fn depth_profile(d: &Diagram) -> Vec<usize> {
    let nf = d.face_count();
    let mut depth = vec![0usize; nf];
    let mut queue = VecDeque::new();
    for (f, face) in d.faces.iter().enumerate() {
        if face.cycle.iter().any(|&h| d.half_edges[h].twin.is_none()) {
            depth[f] = 1;
            queue.push_back(f);
        }
    }
    while let Some(f) = queue.pop_front() {
        for &h in &d.faces[f].cycle {
            if let Some(t) = d.half_edges[h].twin {
                let g = d.half_edges[t].face;
                if depth[g] == 0 {
                    depth[g] = depth[f] + 1;
                    queue.push_back(g);
                }
            }
        }
    }
    depth
}

/// Depth bounds for a diagram whose subdiagrams satisfy a linear
/// isoperimetric inequality with constant `c`: every face is within
/// `1 + α log|D|` of the boundary, with `α = 1/log(1/(1 − c))`, and at most
/// `(1 − c)^{k−1}|D|` faces lie at depth `k` or more.
pub fn narrowness_check(d: &Diagram, c: f64) -> bool {
    assert!(c > 0.0 && c <= 1.0, "constant must lie in (0, 1]");
    let depth = depth_profile(d);
    let n = depth.len();
    if n == 0 {
        return true;
    }
    let alpha = if c >= 1.0 { 0.0 } else { 1.0 / (1.0 / (1.0 - c)).ln() };
    let max_depth = depth.iter().copied().max().unwrap_or(0);
    if max_depth as f64 > 1.0 + alpha * (n as f64).ln() + 1e-9 {
        return false;
    }
    (1..=max_depth).all(|k| {
        let at_least = depth.iter().filter(|&&x| x >= k).count();
        at_least as f64 <= (1.0 - c).powi(k as i32 - 1) * n as f64 + 1e-9
    })
}

/// A path through the interior joining two boundary vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarterCut {
    /// Vertex ids (see [`Diagram::tail_vertices`]) from one end to the other.
    pub vertices: Vec<usize>,
    /// Half-edges traversed, one per step.
    pub half_edges: Vec<usize>,
    /// Boundary circuit positions of the two ends.
    pub from_position: usize,
    pub to_position: usize,
    /// Boundary edges on each side of the cut.
    pub sides: (usize, usize),
}

impl QuarterCut {
    pub fn len(&self) -> usize {
        self.half_edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.half_edges.is_empty()
    }
}

/// Shortest cut splitting the boundary into two arcs of at least
/// `⌊|∂D|/4⌋` edges each. The path runs along interior edges and meets the
/// boundary only at its ends. Ties go to the lexicographically smallest
/// vertex sequence.
pub fn quarter_cut(d: &Diagram) -> Result<QuarterCut, DiagramError> {
    if d.face_count() < 2 {
        return Err(DiagramError::NoCutNeeded);
    }
    let (vertex_of, nv) = d.tail_vertices();
    let head = |h: usize| vertex_of[d.half_edges[h].next];
    let circuit = d.boundary();
    let total = circuit.len();
    let quarter = total / 4;

    let mut on_boundary = vec![false; nv];
    let mut positions: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (pos, &h) in circuit.iter().enumerate() {
        on_boundary[vertex_of[h]] = true;
        positions[vertex_of[h]].push(pos);
    }
    // Interior edges as (neighbour, half-edge), sorted so walks are canonical.
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (h, e) in d.half_edges.iter().enumerate() {
        if e.twin.is_some() {
            adjacency[vertex_of[h]].push((head(h), h));
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }

    // Distances from a boundary vertex, expanding only through interior vertices.
    let distances = |source: usize| -> Vec<usize> {
        let mut dist = vec![usize::MAX; nv];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            if u != source && on_boundary[u] {
                continue;
            }
            for &(w, _) in &adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    };
    let splits = |p: usize, q: usize| {
        let a = (q + total - p) % total;
        (a, total - a)
    };

    let mut best_len = usize::MAX;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for s in (0..nv).filter(|&v| on_boundary[v]) {
        let dist = distances(s);
        for t in (0..nv).filter(|&v| on_boundary[v] && dist[v] != usize::MAX) {
            let ok = positions[s].iter().any(|&p| {
                positions[t].iter().any(|&q| {
                    let (a, b) = splits(p, q);
                    (s != t || p != q) && a >= quarter && b >= quarter
                })
            });
            if !ok {
                continue;
            }
            match dist[t].cmp(&best_len) {
                std::cmp::Ordering::Less => {
                    best_len = dist[t];
                    pairs = vec![(s, t)];
                }
                std::cmp::Ordering::Equal => pairs.push((s, t)),
                std::cmp::Ordering::Greater => {}
            }
        }
    }
    if pairs.is_empty() {
        return Err(DiagramError::NoCut);
    }

    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for (s, t) in pairs {
        // Greedy descent on the distance field of `t` yields the smallest walk.
        let to_t = distances(t);
        let mut vertices = vec![s];
        let mut edges = Vec::new();
        let mut u = s;
        while u != t {
            let &(w, h) = adjacency[u]
                .iter()
                .find(|&&(w, _)| to_t[w] != usize::MAX && to_t[w] + 1 == to_t[u] && (w == t || !on_boundary[w]))
                .expect("a shortest path continues");
            vertices.push(w);
            edges.push(h);
            u = w;
        }
        if best.as_ref().is_none_or(|(v, _)| vertices < *v) {
            best = Some((vertices, edges));
        }
    }
    let (vertices, half_edges) = best.expect("at least one pair");
    let (s, t) = (vertices[0], *vertices.last().expect("nonempty path"));
    let (from_position, to_position) = positions[s]
        .iter()
        .flat_map(|&p| positions[t].iter().map(move |&q| (p, q)))
        .find(|&(p, q)| {
            let (a, b) = splits(p, q);
            (s != t || p != q) && a >= quarter && b >= quarter
        })
        .expect("pair was admissible");
    Ok(QuarterCut { vertices, half_edges, from_position, to_position, sides: splits(from_position, to_position) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceBoundaryStats {
    pub total_boundary_edges: usize,
    pub max_consecutive_run: usize,
    pub run_count: usize,
}

/// How each face meets the boundary, as maximal cyclic runs of boundary
/// edges along its cycle.
pub fn face_boundary_stats(d: &Diagram) -> Vec<FaceBoundaryStats> {
    d.faces
        .iter()
        .map(|face| {
            let on: Vec<bool> = face.cycle.iter().map(|&h| d.half_edges[h].twin.is_none()).collect();
            let total = on.iter().filter(|&&b| b).count();
            if total == on.len() {
                return FaceBoundaryStats { total_boundary_edges: total, max_consecutive_run: total, run_count: 1 };
            }
            let start = on.iter().position(|&b| !b).expect("some edge is interior");
            let (mut runs, mut longest, mut current) = (0, 0, 0);
            for k in 1..=on.len() {
                if on[(start + k) % on.len()] {
                    if current == 0 {
                        runs += 1;
                    }
                    current += 1;
                    longest = longest.max(current);
                } else {
                    current = 0;
                }
            }
            FaceBoundaryStats { total_boundary_edges: total, max_consecutive_run: longest, run_count: runs }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceClass {
    /// One boundary run.
    Good,
    /// Two or more boundary runs.
    Bad,
    /// No boundary edge.
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadFaceDecomposition {
    pub classes: Vec<FaceClass>,
    pub good: Vec<usize>,
    pub bad: Vec<usize>,
    pub internal: Vec<usize>,
    /// Maximal edge-connected sets of faces that are not bad.
    pub parts: Vec<Vec<usize>>,
    /// Indices into `parts` of those touching exactly one bad face.
    pub extremal: Vec<usize>,
}

pub fn bad_face_decomposition(d: &Diagram) -> BadFaceDecomposition {
    let classes: Vec<FaceClass> = face_boundary_stats(d)
        .iter()
        .map(|s| match s.run_count {
            0 => FaceClass::Internal,
            1 => FaceClass::Good,
            _ => FaceClass::Bad,
        })
        .collect();
    let pick = |c: FaceClass| (0..classes.len()).filter(|&f| classes[f] == c).collect::<Vec<_>>();
    let neighbours = |f: usize| {
        d.faces[f].cycle.iter().filter_map(|&h| d.half_edges[h].twin).map(|t| d.half_edges[t].face).collect::<Vec<_>>()
    };
    let nf = classes.len();
    let mut part_of = vec![usize::MAX; nf];
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for start in 0..nf {
        if classes[start] == FaceClass::Bad || part_of[start] != usize::MAX {
            continue;
        }
        let id = parts.len();
        part_of[start] = id;
        let mut members = vec![start];
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            for g in neighbours(f) {
                if classes[g] != FaceClass::Bad && part_of[g] == usize::MAX {
                    part_of[g] = id;
                    members.push(g);
                    stack.push(g);
                }
            }
        }
        members.sort_unstable();
        parts.push(members);
    }
    let extremal = parts
        .iter()
        .enumerate()
        .filter(|(_, members)| {
            let mut touching: Vec<usize> =
                members.iter().flat_map(|&f| neighbours(f)).filter(|&g| classes[g] == FaceClass::Bad).collect();
            touching.sort_unstable();
            touching.dedup();
            touching.len() == 1
        })
        .map(|(k, _)| k)
        .collect();
    BadFaceDecomposition {
        good: pick(FaceClass::Good),
        bad: pick(FaceClass::Bad),
        internal: pick(FaceClass::Internal),
        classes,
        parts,
        extremal,
    }
}
