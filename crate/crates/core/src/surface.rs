//! Bordered surfaces cut into polygons by boundary-to-boundary arcs.
//!
//! Only the arcs are modeled; boundary subarcs between consecutive sides of a
//! polygon are implicit, so an `s`-gon is a polygon with `s` arc sides. Because
//! the universal cover of a bordered hyperbolic surface is a disk, the lifted
//! dual graph is a tree and a reduced sequence of directed arc crossings names
//! a lifted path uniquely. No cover is ever built.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

pub type ArcId = usize;
pub type PolygonId = i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    fn index(self) -> usize {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "L",
            Side::Right => "R",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSignature {
    pub genus: u32,
    pub boundary_components: u32,
}

impl SurfaceSignature {
    pub fn new(genus: u32, boundary_components: u32) -> Self {
        SurfaceSignature {
            genus,
            boundary_components,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_components as i64
    }

    /// Disk and annulus (and the closed cases) are excluded.
    pub fn is_admissible(&self) -> bool {
        self.boundary_components > 0 && self.euler_characteristic() < 0
    }
}

/// One side of a polygon: an arc seen from one of its two sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideRef {
    pub arc: ArcId,
    pub side: Side,
}

impl SideRef {
    pub fn new(arc: ArcId, side: Side) -> Self {
        SideRef { arc, side }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Polygon {
    pub id: PolygonId,
    /// Counterclockwise.
    pub sides: Vec<SideRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TessellationDoc {
    genus: u32,
    boundary: u32,
    arcs: usize,
    polygons: Vec<Polygon>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "TessellationDoc", into = "TessellationDoc")]
pub struct Tessellation {
    signature: SurfaceSignature,
    arc_count: usize,
    polygons: Vec<Polygon>,
    /// `(arc, side)` -> `(polygon index, position)`; first occurrence wins.
    slots: Vec<Option<(usize, usize)>>,
}

impl From<TessellationDoc> for Tessellation {
    fn from(doc: TessellationDoc) -> Self {
        Tessellation::new(
            SurfaceSignature::new(doc.genus, doc.boundary),
            doc.arcs,
            doc.polygons,
        )
    }
}

impl From<Tessellation> for TessellationDoc {
    fn from(t: Tessellation) -> Self {
        TessellationDoc {
            genus: t.signature.genus,
            boundary: t.signature.boundary_components,
            arcs: t.arc_count,
            polygons: t.polygons,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    InadmissibleSignature {
        euler_characteristic: i64,
    },
    NoPolygons,
    DuplicatePolygonId {
        polygon: PolygonId,
    },
    PolygonTooSmall {
        polygon: PolygonId,
        sides: usize,
    },
    UnknownArc {
        polygon: PolygonId,
        arc: ArcId,
    },
    ArcMultiplicity {
        arc: ArcId,
        count: usize,
    },
    ArcSideMultiplicity {
        arc: ArcId,
        side: Side,
        count: usize,
    },
    EulerMismatch {
        signature: i64,
        tessellation: i64,
    },
    Disconnected {
        polygon: PolygonId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InadmissibleSignature { euler_characteristic } => write!(
                f,
                "signature: euler characteristic {euler_characteristic} is not negative"
            ),
            Violation::NoPolygons => write!(f, "polygon count: tessellation has no polygons"),
            Violation::DuplicatePolygonId { polygon } => {
                write!(f, "polygon id: {polygon} is used more than once")
            }
            Violation::PolygonTooSmall { polygon, sides } => {
                write!(f, "polygon size: polygon {polygon} has {sides} sides, need at least 2")
            }
            Violation::UnknownArc { polygon, arc } => {
                write!(f, "arc range: polygon {polygon} references unknown arc {arc}")
            }
            Violation::ArcMultiplicity { arc, count } => {
                write!(f, "arc multiplicity: arc {arc} is referenced {count} times, expected 2")
            }
            Violation::ArcSideMultiplicity { arc, side, count } => write!(
                f,
                "arc multiplicity: side {side} of arc {arc} is referenced {count} times, expected 1"
            ),
            Violation::EulerMismatch { signature, tessellation } => write!(
                f,
                "euler characteristic: signature gives {signature}, polygons - arcs gives {tessellation}"
            ),
            Violation::Disconnected { polygon } => {
                write!(f, "connectivity: polygon {polygon} is not reachable from the first polygon")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid tessellation: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct TessellationError {
    pub violations: Vec<Violation>,
}

impl Tessellation {
    /// Builds without checking; see [`validate`].
    pub fn new(signature: SurfaceSignature, arc_count: usize, polygons: Vec<Polygon>) -> Self {
        let mut slots = vec![None; 2 * arc_count];
        for (pi, poly) in polygons.iter().enumerate() {
            for (k, s) in poly.sides.iter().enumerate() {
                if s.arc < arc_count {
                    let slot = &mut slots[2 * s.arc + s.side.index()];
                    if slot.is_none() {
                        *slot = Some((pi, k));
                    }
                }
            }
        }
        Tessellation {
            signature,
            arc_count,
            polygons,
            slots,
        }
    }

    pub fn validated(
        signature: SurfaceSignature,
        arc_count: usize,
        polygons: Vec<Polygon>,
    ) -> Result<Self, TessellationError> {
        Tessellation::new(signature, arc_count, polygons).into_validated()
    }

    pub fn into_validated(self) -> Result<Self, TessellationError> {
        let violations = validate(&self);
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(TessellationError { violations })
        }
    }

    pub fn signature(&self) -> SurfaceSignature {
        self.signature
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    /// Polygon index and side position holding `(arc, side)`.
    pub fn slot(&self, arc: ArcId, side: Side) -> Option<(usize, usize)> {
        self.slots.get(2 * arc + side.index()).copied().flatten()
    }

    /// Number of sides of the polygon at `index`.
    pub fn polygon_size(&self, index: usize) -> usize {
        self.polygons[index].sides.len()
    }

    /// Counts boundary components by following polygon corners around each
    /// ideal vertex. Each corner is a boundary subarc; corners glue into one
    /// cycle per boundary component.
    pub fn boundary_cycles(&self) -> usize {
        let mut seen: Vec<Vec<bool>> = self
            .polygons
            .iter()
            .map(|p| vec![false; p.sides.len()])
            .collect();
        let mut cycles = 0;
        for pi in 0..self.polygons.len() {
            for k in 0..self.polygons[pi].sides.len() {
                if seen[pi][k] {
                    continue;
                }
                cycles += 1;
                let (mut p, mut c) = (pi, k);
                while !seen[p][c] {
                    seen[p][c] = true;
                    let n = self.polygons[p].sides.len();
                    let next = self.polygons[p].sides[(c + 1) % n];
                    match self.slot(next.arc, next.side.opposite()) {
                        Some(slot) => (p, c) = slot,
                        None => break,
                    }
                }
            }
        }
        cycles
    }
}

/// Lists every violated tessellation invariant; empty means valid.
pub fn validate(tess: &Tessellation) -> Vec<Violation> {
    let mut out = Vec::new();
    let chi = tess.signature.euler_characteristic();
    if !tess.signature.is_admissible() {
        out.push(Violation::InadmissibleSignature {
            euler_characteristic: chi,
        });
    }
    if tess.polygons.is_empty() {
        out.push(Violation::NoPolygons);
        return out;
    }

    let mut ids = HashMap::new();
    for p in &tess.polygons {
        if ids.insert(p.id, ()).is_some() {
            out.push(Violation::DuplicatePolygonId { polygon: p.id });
        }
    }

    let mut counts = vec![[0usize; 2]; tess.arc_count];
    for p in &tess.polygons {
        if p.sides.len() < 2 {
            out.push(Violation::PolygonTooSmall {
                polygon: p.id,
                sides: p.sides.len(),
            });
        }
        for s in &p.sides {
            match counts.get_mut(s.arc) {
                Some(c) => c[s.side.index()] += 1,
                None => out.push(Violation::UnknownArc {
                    polygon: p.id,
                    arc: s.arc,
                }),
            }
        }
    }
    for (arc, c) in counts.iter().enumerate() {
        let total = c[0] + c[1];
        if total != 2 {
            out.push(Violation::ArcMultiplicity { arc, count: total });
        } else {
            for side in [Side::Left, Side::Right] {
                if c[side.index()] != 1 {
                    out.push(Violation::ArcSideMultiplicity {
                        arc,
                        side,
                        count: c[side.index()],
                    });
                }
            }
        }
    }

    let tess_chi = tess.polygons.len() as i64 - tess.arc_count as i64;
    if tess_chi != chi {
        out.push(Violation::EulerMismatch {
            signature: chi,
            tessellation: tess_chi,
        });
    }

    // dual graph: polygons joined across arcs
    let mut reached = vec![false; tess.polygons.len()];
    let mut queue = VecDeque::from([0usize]);
    reached[0] = true;
    while let Some(pi) = queue.pop_front() {
        for s in &tess.polygons[pi].sides {
            if let Some((q, _)) = tess.slot(s.arc, s.side.opposite()) {
                if !reached[q] {
                    reached[q] = true;
                    queue.push_back(q);
                }
            }
        }
    }
    if let Some(pi) = reached.iter().position(|r| !r) {
        out.push(Violation::Disconnected {
            polygon: tess.polygons[pi].id,
        });
    }
    out
}

/// Passing through `arc`, entering the polygon on its `enter` side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Crossing {
    pub arc: ArcId,
    pub enter: Side,
}

impl Crossing {
    pub fn new(arc: ArcId, enter: Side) -> Self {
        Crossing { arc, enter }
    }

    pub fn reversed(self) -> Crossing {
        Crossing {
            arc: self.arc,
            enter: self.enter.opposite(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TessPath {
    pub crossings: Vec<Crossing>,
}

impl TessPath {
    pub fn new(crossings: Vec<Crossing>) -> Self {
        TessPath { crossings }
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn reversed(&self) -> TessPath {
        TessPath {
            crossings: self.crossings.iter().rev().map(|c| c.reversed()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("crossing {index} refers to arc {arc} side {side}, which no polygon holds")]
    UnknownSlot {
        index: usize,
        arc: ArcId,
        side: Side,
    },
    #[error("path is not composable at junction {index}: crossing {index} enters a polygon that crossing {} does not leave", .index + 1)]
    NotComposable { index: usize },
    #[error("cannot concatenate: first path ends on arc {end}, second starts on arc {start}")]
    JoinMismatch { end: ArcId, start: ArcId },
}

/// One polygon traversal between consecutive crossings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Traversal {
    pub polygon: usize,
    pub size: usize,
    pub entry: usize,
    pub exit: usize,
}

impl Traversal {
    /// Counterclockwise side offset from entry to exit, in `0..size`.
    pub fn offset(&self) -> usize {
        (self.exit + self.size - self.entry) % self.size
    }
}

/// Checks composability and lists the polygon traversals of `path`.
pub fn traversals(tess: &Tessellation, path: &TessPath) -> Result<Vec<Traversal>, PathError> {
    let c = &path.crossings;
    for (index, x) in c.iter().enumerate() {
        for side in [x.enter, x.enter.opposite()] {
            if tess.slot(x.arc, side).is_none() {
                return Err(PathError::UnknownSlot {
                    index,
                    arc: x.arc,
                    side,
                });
            }
        }
    }
    let mut out = Vec::with_capacity(c.len().saturating_sub(1));
    for (index, w) in c.windows(2).enumerate() {
        let (p_in, entry) = tess.slot(w[0].arc, w[0].enter).unwrap();
        let (p_out, exit) = tess.slot(w[1].arc, w[1].enter.opposite()).unwrap();
        if p_in != p_out {
            return Err(PathError::NotComposable { index });
        }
        out.push(Traversal {
            polygon: p_in,
            size: tess.polygon_size(p_in),
            entry,
            exit,
        });
    }
    Ok(out)
}

/// Cancels adjacent mutually-reversing crossings until none remain.
pub fn reduce_path(tess: &Tessellation, path: &TessPath) -> Result<TessPath, PathError> {
    traversals(tess, path)?;
    let mut stack: Vec<Crossing> = Vec::with_capacity(path.len());
    for &c in &path.crossings {
        if stack.last() == Some(&c.reversed()) {
            stack.pop();
        } else {
            stack.push(c);
        }
    }
    Ok(TessPath::new(stack))
}

/// Concatenates two arc-anchored paths sharing the arc where the first ends
/// and the second starts, and returns the reduced result.
///
/// If both paths cross the shared arc in the same direction the crossing is
/// merged. Otherwise the path touches the shared arc and turns back, and the
/// excursions cancel pairwise; when cancellation reaches an endpoint the
/// remaining path keeps that endpoint's arc as its anchor.
pub fn join_paths(
    tess: &Tessellation,
    first: &TessPath,
    second: &TessPath,
) -> Result<TessPath, PathError> {
    let a = reduce_path(tess, first)?.crossings;
    let b = reduce_path(tess, second)?.crossings;
    let (Some(&end), Some(&start)) = (a.last(), b.first()) else {
        let mut all = a;
        all.extend(b);
        return Ok(TessPath::new(all));
    };
    if end.arc != start.arc {
        return Err(PathError::JoinMismatch {
            end: end.arc,
            start: start.arc,
        });
    }
    if end == start {
        let mut out = a;
        out.extend_from_slice(&b[1..]);
        return Ok(TessPath::new(out));
    }
    let (mut i, mut j) = (a.len() - 1, 0usize);
    while a[i] == b[j].reversed() {
        if i == 0 {
            return Ok(TessPath::new(b[j..].to_vec()));
        }
        if j + 1 == b.len() {
            return Ok(TessPath::new(a[..=i].to_vec()));
        }
        i -= 1;
        j += 1;
    }
    let mut out = a[..=i].to_vec();
    out.extend_from_slice(&b[j..]);
    Ok(TessPath::new(out))
}

/// Where an arc goes under a relabeling, and whether its sides swap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcImage {
    pub arc: ArcId,
    #[serde(default)]
    pub flip: bool,
}

/// Simultaneous relabeling of arcs and polygons (by index).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relabeling {
    pub arcs: Vec<ArcImage>,
    pub polygons: Vec<usize>,
}

impl Relabeling {
    pub fn identity(tess: &Tessellation) -> Self {
        Relabeling {
            arcs: (0..tess.arc_count())
                .map(|arc| ArcImage { arc, flip: false })
                .collect(),
            polygons: (0..tess.polygons().len()).collect(),
        }
    }

    pub fn map_side(&self, s: SideRef) -> SideRef {
        let img = self.arcs[s.arc];
        SideRef {
            arc: img.arc,
            side: if img.flip { s.side.opposite() } else { s.side },
        }
    }

    pub fn map_crossing(&self, c: Crossing) -> Crossing {
        let s = self.map_side(SideRef::new(c.arc, c.enter));
        Crossing {
            arc: s.arc,
            enter: s.side,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AutomorphismError {
    #[error("relabeling of {what} is not a permutation")]
    NotAPermutation { what: &'static str },
    #[error("relabeling reverses the side order of polygon {polygon}")]
    OrientationReversing { polygon: PolygonId },
    #[error("relabeling does not preserve the side order of polygon {polygon}")]
    SideOrderNotPreserved { polygon: PolygonId },
}

fn is_permutation(v: &[usize]) -> bool {
    let mut seen = vec![false; v.len()];
    v.iter()
        .all(|&x| x < v.len() && !std::mem::replace(&mut seen[x], true))
}

fn is_rotation<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len()
        && (a.is_empty()
            || (0..b.len()).any(|r| (0..a.len()).all(|k| a[k] == b[(k + r) % b.len()])))
}

/// Checks that `g` maps the tessellation to itself preserving every polygon's
/// counterclockwise side order up to rotation.
pub fn check_automorphism(tess: &Tessellation, g: &Relabeling) -> Result<(), AutomorphismError> {
    let arc_targets: Vec<usize> = g.arcs.iter().map(|a| a.arc).collect();
    if g.arcs.len() != tess.arc_count() || !is_permutation(&arc_targets) {
        return Err(AutomorphismError::NotAPermutation { what: "arcs" });
    }
    if g.polygons.len() != tess.polygons().len() || !is_permutation(&g.polygons) {
        return Err(AutomorphismError::NotAPermutation { what: "polygons" });
    }
    for (pi, poly) in tess.polygons().iter().enumerate() {
        let image: Vec<SideRef> = poly.sides.iter().map(|&s| g.map_side(s)).collect();
        let target = &tess.polygons()[g.polygons[pi]].sides;
        if is_rotation(&image, target) {
            continue;
        }
        let reversed: Vec<SideRef> = image.iter().rev().copied().collect();
        let mirrored: Vec<SideRef> = reversed
            .iter()
            .map(|s| SideRef::new(s.arc, s.side.opposite()))
            .collect();
        if is_rotation(&reversed, target) || is_rotation(&mirrored, target) {
            return Err(AutomorphismError::OrientationReversing { polygon: poly.id });
        }
        return Err(AutomorphismError::SideOrderNotPreserved { polygon: poly.id });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ApplyError {
    #[error(transparent)]
    Automorphism(#[from] AutomorphismError),
    #[error(transparent)]
    Path(#[from] PathError),
}

pub fn automorphism_apply(
    tess: &Tessellation,
    g: &Relabeling,
    path: &TessPath,
) -> Result<TessPath, ApplyError> {
    check_automorphism(tess, g)?;
    traversals(tess, path)?;
    Ok(TessPath::new(
        path.crossings.iter().map(|&c| g.map_crossing(c)).collect(),
    ))
}

/// Small fixed tessellations used by tests, the CLI fuzzer and the demo.
pub mod fixtures {
    use super::*;

    fn poly(id: PolygonId, sides: &[(ArcId, Side)]) -> Polygon {
        Polygon {
            id,
            sides: sides
                .iter()
                .map(|&(arc, side)| SideRef { arc, side })
                .collect(),
        }
    }

    use Side::{Left as L, Right as R};

    /// Two triangles glued along three arcs; three boundary components.
    pub fn pair_of_pants() -> Tessellation {
        Tessellation::new(
            SurfaceSignature::new(0, 3),
            3,
            vec![
                poly(0, &[(0, L), (1, L), (2, L)]),
                poly(1, &[(0, R), (2, R), (1, R)]),
            ],
        )
    }

    /// Once-holed torus: both triangles see the arcs in the same cyclic order.
    pub fn holed_torus() -> Tessellation {
        Tessellation::new(
            SurfaceSignature::new(1, 1),
            3,
            vec![
                poly(0, &[(0, L), (1, L), (2, L)]),
                poly(1, &[(0, R), (1, R), (2, R)]),
            ],
        )
    }

    /// Genus two, one boundary component: six triangles on nine arcs.
    pub fn genus_two() -> Tessellation {
        Tessellation::new(
            SurfaceSignature::new(2, 1),
            9,
            vec![
                poly(0, &[(7, R), (8, R), (0, L)]),
                poly(1, &[(6, R), (5, L), (0, R)]),
                poly(2, &[(5, R), (1, L), (2, L)]),
                poly(3, &[(2, R), (3, R), (8, L)]),
                poly(4, &[(7, L), (4, R), (6, L)]),
                poly(5, &[(3, L), (4, L), (1, R)]),
            ],
        )
    }

    /// Two 7-gons glued along seven arcs: a sphere with seven holes.
    pub fn heptagon_pair() -> Tessellation {
        let a: Vec<(ArcId, Side)> = (0..7).map(|i| (i, L)).collect();
        let b: Vec<(ArcId, Side)> = (0..7).rev().map(|i| (i, R)).collect();
        Tessellation::new(
            SurfaceSignature::new(0, 7),
            7,
            vec![poly(0, &a), poly(1, &b)],
        )
    }
}
