//! Building diagrams by gluing, and taking them apart.

use super::analysis::first_cancellable_among;
use super::{Diagram, DiagramError, Face, HalfEdge};
use crate::pieces::{Occurrence, PieceMatch};
use crate::presentation::Presentation;
use crate::words::{oriented_letter, Orientation};

/// `len` consecutive edges of the outer boundary circuit starting at
/// position `start` (cyclically).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryArc {
    pub start: usize,
    pub len: usize,
}

impl BoundaryArc {
    pub fn new(start: usize, len: usize) -> BoundaryArc {
        BoundaryArc { start, len }
    }

    /// Boundary half-edges of the arc in circuit order.
    pub fn half_edges(&self, d: &Diagram) -> Vec<usize> {
        let b = d.boundary();
        (0..self.len).map(|k| b[(self.start + k) % b.len()]).collect()
    }
}

/// Glues a new face spelling `occ` (its word from `occ.offset` on) onto a
/// boundary arc. The first `arc.len` letters of the face must spell the
/// inverse of the arc's word.
pub fn glue_relator_to_boundary(d: &Diagram, p: &Presentation, occ: Occurrence, arc: BoundaryArc) -> Result<Diagram, DiagramError> {
    let ell = d.ell();
    if occ.relator >= p.len() || p.ell() != ell {
        return Err(DiagramError::NoSuchRelator);
    }
    let circuit_len = d.boundary().len();
    if arc.start >= circuit_len {
        return Err(DiagramError::NoSuchPosition(arc.start));
    }
    if arc.len == 0 {
        return Err(DiagramError::EmptyArc);
    }
    if arc.len >= ell {
        return Err(DiagramError::ArcTooLong { len: arc.len, limit: ell });
    }
    if arc.len >= circuit_len || d.boundary_cycles().len() != 1 {
        return Err(DiagramError::NonDisc);
    }
    let arc_edges = arc.half_edges(d);
    let r = p.relator(occ.relator).letters();
    let base = d.half_edges.len();
    let face = d.faces.len();
    let mut half_edges = d.half_edges.clone();
    let mut cycle = Vec::with_capacity(ell);
    for k in 0..ell {
        let label = oriented_letter(r, occ.orientation, occ.offset + k);
        let twin = if k < arc.len {
            let b = arc_edges[arc.len - 1 - k];
            if half_edges[b].label != label.inverse() {
                return Err(DiagramError::LabelMismatch { position: arc.len - 1 - k });
            }
            half_edges[b].twin = Some(base + k);
            Some(b)
        } else {
            None
        };
        half_edges.push(HalfEdge { twin, next: base + (k + 1) % ell, label, face });
        cycle.push(base + k);
    }
    let mut faces = d.faces.clone();
    faces.push(Face { relator: occ.relator, orientation: occ.orientation, rotation: occ.offset % ell, cycle });
    let glued = Diagram::from_parts(ell, half_edges, faces);
    if !glued.is_disc() {
        return Err(DiagramError::NonDisc);
    }
    if let Some(h) = first_cancellable_among(&glued, base..base + arc.len) {
        return Err(DiagramError::Unreduced { half_edge: h });
    }
    Ok(glued)
}

/// The 2-face diagram of `r_i` and `r_j` glued along the matched piece.
pub fn glue_two_relators(p: &Presentation, m: &PieceMatch) -> Result<Diagram, DiagramError> {
    let ell = p.ell();
    if m.i >= p.len() || m.j >= p.len() {
        return Err(DiagramError::NoSuchRelator);
    }
    if m.length == 0 {
        return Err(DiagramError::EmptyArc);
    }
    if m.length >= ell {
        return Err(DiagramError::FullLength);
    }
    let a = Diagram::single_face(p, m.i, Orientation::Direct, 0);
    // The piece u sits at offset_j in r_j read in m.orientation, so u^{-1}
    // sits in the opposite reading at the mirrored offset.
    let occ = Occurrence {
        relator: m.j,
        orientation: m.orientation.flip(),
        offset: (2 * ell - m.offset_j % ell - m.length) % ell,
    };
    glue_relator_to_boundary(&a, p, occ, BoundaryArc::new(m.offset_i % ell, m.length))
}

/// `D₁ ∪_w D₂`: identifies an arc of `D₁` spelling `w` with an arc of `D₂`
/// spelling `w^{-1}`.
pub fn glue_diagrams_along(d1: &Diagram, d2: &Diagram, arc1: BoundaryArc, start2: usize) -> Result<Diagram, DiagramError> {
    let ell = d1.ell();
    if d2.ell() != ell {
        return Err(DiagramError::NonDisc);
    }
    let (l1, l2) = (d1.boundary().len(), d2.boundary().len());
    if arc1.start >= l1 {
        return Err(DiagramError::NoSuchPosition(arc1.start));
    }
    if start2 >= l2 {
        return Err(DiagramError::NoSuchPosition(start2));
    }
    if arc1.len == 0 {
        return Err(DiagramError::EmptyArc);
    }
    if arc1.len >= l1 || arc1.len >= l2 {
        return Err(DiagramError::NonDisc);
    }
    let a = arc1.half_edges(d1);
    let shift = d1.half_edges.len();
    let face_shift = d1.faces.len();
    let b: Vec<usize> = BoundaryArc::new(start2, arc1.len).half_edges(d2).into_iter().map(|h| h + shift).collect();
    let mut half_edges = d1.half_edges.clone();
    half_edges.extend(d2.half_edges.iter().map(|e| HalfEdge {
        twin: e.twin.map(|t| t + shift),
        next: e.next + shift,
        label: e.label,
        face: e.face + face_shift,
    }));
    let k = arc1.len;
    for i in 0..k {
        let (x, y) = (a[i], b[k - 1 - i]);
        if half_edges[y].label != half_edges[x].label.inverse() {
            return Err(DiagramError::LabelMismatch { position: i });
        }
        half_edges[x].twin = Some(y);
        half_edges[y].twin = Some(x);
    }
    let mut faces = d1.faces.clone();
    faces.extend(d2.faces.iter().map(|f| Face { cycle: f.cycle.iter().map(|h| h + shift).collect(), ..f.clone() }));
    let glued = Diagram::from_parts(ell, half_edges, faces);
    if !glued.is_disc() {
        return Err(DiagramError::NonDisc);
    }
    if let Some(h) = first_cancellable_among(&glued, a.iter().copied()) {
        return Err(DiagramError::Unreduced { half_edge: h });
    }
    Ok(glued)
}

/// `|w| ≤ d(|∂D₁| + |∂D₂|)(1 + ε)`.
pub fn macroscopic_cancellation_check(d1: &Diagram, d2: &Diagram, w_len: usize, d: f64, eps: f64) -> bool {
    let bound = d * (d1.boundary_length() + d2.boundary_length()) as f64 * (1.0 + eps);
    w_len as f64 <= bound + 1e-9
}

/// One connected piece left after removing a face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub diagram: Diagram,
    /// False for annuli and other non-disc remains.
    pub is_disc: bool,
}

/// Deletes the open face `f` (its edges stay as boundary of the neighbours)
/// and splits what remains into connected components, ordered by their
/// smallest original face.
pub fn remove_face(d: &Diagram, f: usize) -> Result<Vec<Component>, DiagramError> {
    if f >= d.faces.len() {
        return Err(DiagramError::NoSuchFace(f));
    }
    let nf = d.faces.len();
    let mut comp = vec![usize::MAX; nf];
    let mut roots = Vec::new();
    for start in 0..nf {
        if start == f || comp[start] != usize::MAX {
            continue;
        }
        let c = roots.len();
        roots.push(start);
        comp[start] = c;
        let mut stack = vec![start];
        while let Some(g) = stack.pop() {
            for &h in &d.faces[g].cycle {
                if let Some(t) = d.half_edges[h].twin {
                    let other = d.half_edges[t].face;
                    if other != f && comp[other] == usize::MAX {
                        comp[other] = c;
                        stack.push(other);
                    }
                }
            }
        }
    }
    let mut out = Vec::with_capacity(roots.len());
    for c in 0..roots.len() {
        let kept: Vec<usize> = (0..nf).filter(|&g| comp[g] == c).collect();
        let mut new_face = vec![usize::MAX; nf];
        for (k, &g) in kept.iter().enumerate() {
            new_face[g] = k;
        }
        let mut new_id = vec![usize::MAX; d.half_edges.len()];
        let mut next_id = 0;
        for (h, e) in d.half_edges.iter().enumerate() {
            if new_face[e.face] != usize::MAX {
                new_id[h] = next_id;
                next_id += 1;
            }
        }
        let half_edges: Vec<HalfEdge> = d
            .half_edges
            .iter()
            .filter(|e| new_face[e.face] != usize::MAX)
            .map(|e| HalfEdge {
                twin: e.twin.filter(|&t| d.half_edges[t].face != f).map(|t| new_id[t]),
                next: new_id[e.next],
                label: e.label,
                face: new_face[e.face],
            })
            .collect();
        let faces = kept
            .iter()
            .map(|&g| Face { cycle: d.faces[g].cycle.iter().map(|&h| new_id[h]).collect(), ..d.faces[g].clone() })
            .collect();
        let diagram = Diagram::from_parts(d.ell(), half_edges, faces);
        let is_disc = diagram.is_disc();
        out.push(Component { diagram, is_disc });
    }
    Ok(out)
}
