//! Disc van Kampen diagrams stored as half-edge combinatorial maps.
//!
//! Every face is a cycle of `ell` half-edges traversed in the common
//! orientation of the disc. A half-edge whose twin is missing lies on the
//! outer boundary; walking those in face direction gives the boundary word.
//! Half-edge `k` of a face cycle carries letter `k + rotation` of its relator
//! read in the face's orientation.

mod analysis;
mod surgery;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::Presentation;
use crate::words::{oriented_letter, parse_letters, Letter, Orientation};

pub use analysis::{
    bad_face_decomposition, depth_profile, face_boundary_stats, is_reduced_diagram, isoperimetric_check, narrowness_check,
    quarter_cut, BadFaceDecomposition, FaceBoundaryStats, FaceClass, IsoperimetryReport, QuarterCut,
};
pub use surgery::{
    glue_diagrams_along, glue_relator_to_boundary, glue_two_relators, macroscopic_cancellation_check, remove_face, BoundaryArc,
    Component,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("gluing along a whole relator closes a sphere")]
    FullLength,
    #[error("gluing arc is empty")]
    EmptyArc,
    #[error("gluing arc of length {len} is too long (must be below {limit})")]
    ArcTooLong { len: usize, limit: usize },
    #[error("boundary arc does not match the relator at arc position {position}")]
    LabelMismatch { position: usize },
    #[error("gluing does not produce a disc")]
    NonDisc,
    #[error("unreduced gluing: cancellable pair across half-edge {half_edge}")]
    Unreduced { half_edge: usize },
    #[error("face {0} does not exist")]
    NoSuchFace(usize),
    #[error("boundary position {0} is out of range")]
    NoSuchPosition(usize),
    #[error("occurrence does not refer to a relator of the presentation")]
    NoSuchRelator,
    #[error("no cut needed: the diagram has a single face")]
    NoCutNeeded,
    #[error("no quarter cut exists")]
    NoCut,
    #[error("malformed diagram file: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfEdge {
    /// The opposite side of the edge; `None` on the outer boundary.
    pub twin: Option<usize>,
    pub next: usize,
    pub label: Letter,
    pub face: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub relator: usize,
    pub orientation: Orientation,
    pub rotation: usize,
    pub cycle: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    ell: usize,
    half_edges: Vec<HalfEdge>,
    faces: Vec<Face>,
    /// Boundary circuits, each starting at its smallest half-edge id, ordered by that id.
    boundary: Vec<Vec<usize>>,
}

impl Diagram {
    /// The diagram with one face spelling the given relator occurrence.
    pub fn single_face(p: &Presentation, relator: usize, orientation: Orientation, rotation: usize) -> Diagram {
        let ell = p.ell();
        let r = p.relator(relator).letters();
        let half_edges = (0..ell)
            .map(|k| HalfEdge { twin: None, next: (k + 1) % ell, label: oriented_letter(r, orientation, rotation + k), face: 0 })
            .collect();
        let face = Face { relator, orientation, rotation: rotation % ell, cycle: (0..ell).collect() };
        Diagram::from_parts(ell, half_edges, vec![face])
    }

    /// Assembles a map and derives its boundary circuits. The result may be
    /// invalid; see [`Diagram::validate`].
    pub fn from_parts(ell: usize, half_edges: Vec<HalfEdge>, faces: Vec<Face>) -> Diagram {
        let boundary = boundary_circuits(&half_edges).unwrap_or_default();
        Diagram { ell, half_edges, faces, boundary }
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    pub fn half_edge(&self, h: usize) -> &HalfEdge {
        &self.half_edges[h]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    /// `|D|`.
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn boundary_cycles(&self) -> &[Vec<usize>] {
        &self.boundary
    }

    /// The outer boundary circuit of a disc.
    pub fn boundary(&self) -> &[usize] {
        self.boundary.first().map_or(&[], Vec::as_slice)
    }

    /// `|∂D|`: number of boundary edges over all circuits.
    pub fn boundary_length(&self) -> usize {
        self.half_edges.iter().filter(|h| h.twin.is_none()).count()
    }

    pub fn interior_edge_count(&self) -> usize {
        self.half_edges.iter().filter(|h| h.twin.is_some()).count() / 2
    }

    pub fn edge_count(&self) -> usize {
        self.interior_edge_count() + self.boundary_length()
    }

    /// Labels along the outer boundary circuit.
    pub fn boundary_word(&self) -> Vec<Letter> {
        self.boundary().iter().map(|&h| self.half_edges[h].label).collect()
    }

    /// Vertex id of the tail of every half-edge, numbered by smallest half-edge.
    pub fn tail_vertices(&self) -> (Vec<usize>, usize) {
        let n = self.half_edges.len();
        let mut parent: Vec<usize> = (0..n).collect();
        for (h, e) in self.half_edges.iter().enumerate() {
            if let Some(t) = e.twin {
                union(&mut parent, h, self.half_edges[t].next);
            }
        }
        let mut id = vec![usize::MAX; n];
        let mut count = 0;
        let vertex_of = (0..n)
            .map(|h| {
                let root = find(&mut parent, h);
                if id[root] == usize::MAX {
                    id[root] = count;
                    count += 1;
                }
                id[root]
            })
            .collect();
        (vertex_of, count)
    }

    pub fn vertex_count(&self) -> usize {
        self.tail_vertices().1
    }

    /// `V − E + F`, counting only the relator faces.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.faces.len() as i64
    }

    /// Predecessor of every half-edge in its face cycle.
    pub fn prev_table(&self) -> Vec<usize> {
        let mut prev = vec![0; self.half_edges.len()];
        for (h, e) in self.half_edges.iter().enumerate() {
            prev[e.next] = h;
        }
        prev
    }

    /// Position of a half-edge in its face cycle.
    pub fn cycle_position(&self, h: usize) -> usize {
        let f = self.half_edges[h].face;
        self.faces[f].cycle.iter().position(|&x| x == h).expect("half-edge lies on its face cycle")
    }

    /// Checks every structural invariant and the face labels against `p`.
    pub fn validate(&self, p: &Presentation) -> ValidationReport {
        let mut v = Vec::new();
        if !self.check_structure(&mut v) {
            return ValidationReport { violations: v };
        }
        if p.ell() != self.ell {
            v.push(Violation::LengthMismatch { diagram: self.ell, presentation: p.ell() });
        } else {
            for (f, face) in self.faces.iter().enumerate() {
                if face.relator >= p.len() {
                    v.push(Violation::UnknownRelator { face: f, relator: face.relator });
                    continue;
                }
                let r = p.relator(face.relator).letters();
                if let Some(k) = (0..self.ell)
                    .find(|&k| self.half_edges[face.cycle[k]].label != oriented_letter(r, face.orientation, face.rotation + k))
                {
                    v.push(Violation::FaceLabel { face: f, position: k });
                }
            }
        }
        self.check_topology(&mut v);
        ValidationReport { violations: v }
    }

    /// Structure and topology only, without a presentation.
    pub fn is_disc(&self) -> bool {
        let mut v = Vec::new();
        self.check_structure(&mut v) && {
            self.check_topology(&mut v);
            v.is_empty()
        }
    }

    fn check_structure(&self, v: &mut Vec<Violation>) -> bool {
        let n = self.half_edges.len();
        let start = v.len();
        if self.faces.is_empty() {
            v.push(Violation::NoFaces);
        }
        let mut seen = vec![false; n];
        for (f, face) in self.faces.iter().enumerate() {
            if face.cycle.len() != self.ell || face.rotation >= self.ell.max(1) {
                v.push(Violation::FaceShape { face: f });
                continue;
            }
            for (k, &h) in face.cycle.iter().enumerate() {
                if h >= n || seen[h] {
                    v.push(Violation::FaceShape { face: f });
                    break;
                }
                seen[h] = true;
                let e = &self.half_edges[h];
                if e.face != f || e.next != face.cycle[(k + 1) % self.ell] {
                    v.push(Violation::FaceShape { face: f });
                    break;
                }
            }
        }
        if let Some(h) = seen.iter().position(|s| !s) {
            v.push(Violation::Orphan { half_edge: h });
        }
        for (h, e) in self.half_edges.iter().enumerate() {
            if let Some(t) = e.twin {
                if t >= n || t == h || self.half_edges[t].twin != Some(h) {
                    v.push(Violation::Twin { half_edge: h });
                } else if self.half_edges[t].label != e.label.inverse() {
                    v.push(Violation::TwinLabel { half_edge: h });
                }
            }
        }
        v.len() == start
    }

    fn check_topology(&self, v: &mut Vec<Violation>) {
        if !faces_connected(self) {
            v.push(Violation::Disconnected);
        }
        let chi = self.euler_characteristic();
        if chi != 1 {
            v.push(Violation::EulerCharacteristic(chi));
        }
        match boundary_circuits(&self.half_edges) {
            None => v.push(Violation::BoundaryWalk),
            Some(circuits) => {
                if circuits.is_empty() {
                    v.push(Violation::EmptyBoundary);
                } else if circuits.len() > 1 {
                    v.push(Violation::BoundaryComponents(circuits.len()));
                }
                if circuits != self.boundary {
                    v.push(Violation::StaleBoundary);
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        let file = DiagramFile {
            ell: self.ell,
            half_edges: self
                .half_edges
                .iter()
                .enumerate()
                .map(|(id, e)| HalfEdgeRecord { id, twin: e.twin, next: e.next, label: e.label.to_string(), face: e.face })
                .collect(),
            faces: self.faces.clone(),
            boundary: self.boundary.clone(),
        };
        serde_json::to_string_pretty(&file).expect("diagram serializes")
    }

    /// Reads a diagram exactly as stored; the boundary is taken from the file
    /// and [`Diagram::validate`] reports it if it is stale.
    pub fn from_json(text: &str) -> Result<Diagram, DiagramError> {
        let file: DiagramFile = serde_json::from_str(text).map_err(|e| DiagramError::Format(e.to_string()))?;
        let mut half_edges = Vec::with_capacity(file.half_edges.len());
        for (k, rec) in file.half_edges.into_iter().enumerate() {
            if rec.id != k {
                return Err(DiagramError::Format(format!("half-edge {k} has id {}", rec.id)));
            }
            let label = match parse_letters(&rec.label).map_err(|e| DiagramError::Format(e.to_string()))?.as_slice() {
                [l] => *l,
                _ => return Err(DiagramError::Format(format!("half-edge {k} label {:?} is not one letter", rec.label))),
            };
            half_edges.push(HalfEdge { twin: rec.twin, next: rec.next, label, face: rec.face });
        }
        let n = half_edges.len();
        if half_edges.iter().any(|e| e.next >= n) {
            return Err(DiagramError::Format("next pointer out of range".into()));
        }
        Ok(Diagram { ell: file.ell, half_edges, faces: file.faces, boundary: file.boundary })
    }
}

#[derive(Serialize, Deserialize)]
struct HalfEdgeRecord {
    id: usize,
    twin: Option<usize>,
    next: usize,
    label: String,
    face: usize,
}

#[derive(Serialize, Deserialize)]
struct DiagramFile {
    ell: usize,
    half_edges: Vec<HalfEdgeRecord>,
    faces: Vec<Face>,
    boundary: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoFaces,
    FaceShape { face: usize },
    Orphan { half_edge: usize },
    Twin { half_edge: usize },
    TwinLabel { half_edge: usize },
    LengthMismatch { diagram: usize, presentation: usize },
    UnknownRelator { face: usize, relator: usize },
    FaceLabel { face: usize, position: usize },
    Disconnected,
    EulerCharacteristic(i64),
    BoundaryWalk,
    EmptyBoundary,
    BoundaryComponents(usize),
    StaleBoundary,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoFaces => write!(f, "diagram has no faces"),
            Violation::FaceShape { face } => write!(f, "face {face} is not a cycle of ell half-edges"),
            Violation::Orphan { half_edge } => write!(f, "half-edge {half_edge} belongs to no face"),
            Violation::Twin { half_edge } => write!(f, "twin of half-edge {half_edge} is not an involution"),
            Violation::TwinLabel { half_edge } => write!(f, "half-edge {half_edge} and its twin are not inverse letters"),
            Violation::LengthMismatch { diagram, presentation } => {
                write!(f, "diagram relator length {diagram} differs from presentation length {presentation}")
            }
            Violation::UnknownRelator { face, relator } => write!(f, "face {face} uses unknown relator {relator}"),
            Violation::FaceLabel { face, position } => write!(f, "face {face} misspells its relator at position {position}"),
            Violation::Disconnected => write!(f, "diagram is not connected"),
            Violation::EulerCharacteristic(chi) => write!(f, "Euler characteristic is {chi}, expected 1"),
            Violation::BoundaryWalk => write!(f, "boundary walk does not close up"),
            Violation::EmptyBoundary => write!(f, "diagram has no boundary"),
            Violation::BoundaryComponents(n) => write!(f, "boundary has {n} components"),
            Violation::StaleBoundary => write!(f, "stored boundary differs from the recomputed one"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Successor of a boundary half-edge: turn around its head until the next
/// untwinned half-edge. `None` if the turn does not terminate.
fn boundary_successor(half_edges: &[HalfEdge], h: usize) -> Option<usize> {
    let mut g = half_edges[h].next;
    for _ in 0..=half_edges.len() {
        match half_edges[g].twin {
            None => return Some(g),
            Some(t) => g = half_edges[t].next,
        }
    }
    None
}

fn boundary_circuits(half_edges: &[HalfEdge]) -> Option<Vec<Vec<usize>>> {
    let n = half_edges.len();
    if half_edges.iter().any(|e| e.next >= n || e.twin.is_some_and(|t| t >= n)) {
        return None;
    }
    let mut visited = vec![false; n];
    let mut circuits = Vec::new();
    for start in 0..n {
        if half_edges[start].twin.is_some() || visited[start] {
            continue;
        }
        let mut circuit = vec![start];
        visited[start] = true;
        let mut h = boundary_successor(half_edges, start)?;
        while h != start {
            if visited[h] {
                return None;
            }
            visited[h] = true;
            circuit.push(h);
            h = boundary_successor(half_edges, h)?;
        }
        circuits.push(circuit);
    }
    Some(circuits)
}

fn faces_connected(d: &Diagram) -> bool {
    let nf = d.faces.len();
    if nf == 0 {
        return false;
    }
    let mut seen = HashSet::from([0usize]);
    let mut stack = vec![0usize];
    while let Some(f) = stack.pop() {
        for &h in &d.faces[f].cycle {
            if let Some(t) = d.half_edges[h].twin {
                let g = d.half_edges[t].face;
                if seen.insert(g) {
                    stack.push(g);
                }
            }
        }
    }
    seen.len() == nf
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}
