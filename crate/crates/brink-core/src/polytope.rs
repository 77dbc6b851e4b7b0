//! Boundary geometry in sufficient-statistic space: envelopes of line
//! families (which simplex vertices a two-parameter family connects to) and
//! the 2-D zonotope of attainable sufficient statistics with Mahalanobis
//! distance queries against its boundary.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::numerics::{cholesky, NumericsError, SymmetricMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolytopeError {
    #[error("line family needs at least 2 lines, got {0}")]
    TooFewLines(usize),
    #[error("non-finite line coefficients at index {0}")]
    NonFiniteLine(usize),
    #[error("design rows must have exactly 2 columns, got {got}")]
    DimensionError { got: usize },
    #[error("design has no rows")]
    EmptyDesign,
    #[error("non-finite design entry at row {row}")]
    NonFiniteRow { row: usize },
    #[error("center lies on or outside the boundary at edge ({a}, {b})", a = .edge.0, b = .edge.1)]
    CenterOutside { edge: (usize, usize), dist_sq: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// The function θ ↦ slope·θ + intercept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

/// One line per simplex cell; a line's coefficients are the cell's
/// coordinates along the two direction vectors of the family.
#[derive(Debug, Clone, PartialEq)]
pub struct LineFamily {
    lines: Vec<Line>,
}

impl LineFamily {
    pub fn new(lines: Vec<Line>) -> Result<Self, PolytopeError> {
        if lines.len() < 2 {
            return Err(PolytopeError::TooFewLines(lines.len()));
        }
        for (i, l) in lines.iter().enumerate() {
            if !(l.slope.is_finite() && l.intercept.is_finite()) {
                return Err(PolytopeError::NonFiniteLine(i));
            }
        }
        Ok(LineFamily { lines })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self, PolytopeError> {
        Self::new(
            pairs
                .iter()
                .map(|&(m, b)| Line {
                    slope: m,
                    intercept: b,
                })
                .collect(),
        )
    }

    #[inline]
    pub fn lines(&self) -> &[Line] {
        &self.lines
    }
}

/// Maximal θ-interval on which one line is the active envelope member.
/// Unbounded ends use ±infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSegment {
    pub line: usize,
    pub theta_from: f64,
    pub theta_to: f64,
}

/// Upper and lower envelopes of a line family. Segments are ordered by
/// increasing θ, which means increasing slope on the upper envelope and
/// decreasing slope on the lower. `redundant` holds the lines on neither
/// envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeResult {
    pub upper: Vec<EnvelopeSegment>,
    pub lower: Vec<EnvelopeSegment>,
    pub redundant: BTreeSet<usize>,
}

fn intersect(a: Line, b: Line) -> f64 {
    (b.intercept - a.intercept) / (a.slope - b.slope)
}

/// Indices forming the upper envelope, paired with breakpoints.
fn upper_hull(lines: &[Line]) -> Vec<EnvelopeSegment> {
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&i, &j| {
        lines[i]
            .slope
            .partial_cmp(&lines[j].slope)
            .unwrap()
            .then(lines[j].intercept.partial_cmp(&lines[i].intercept).unwrap())
            .then(i.cmp(&j))
    });
    // among equal slopes only the highest intercept can touch the upper
    // envelope on an interval of positive length
    let mut cand: Vec<usize> = Vec::with_capacity(order.len());
    for i in order {
        if let Some(&last) = cand.last() {
            if lines[last].slope == lines[i].slope {
                continue;
            }
        }
        cand.push(i);
    }

    let mut stack: Vec<usize> = Vec::with_capacity(cand.len());
    for k in cand {
        while stack.len() >= 2 {
            let j = stack[stack.len() - 1];
            let i = stack[stack.len() - 2];
            // j survives only if it stays on top over a positive-length
            // interval between its neighbors
            if intersect(lines[j], lines[k]) <= intersect(lines[i], lines[j]) {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(k);
    }

    let mut segs = Vec::with_capacity(stack.len());
    for (pos, &idx) in stack.iter().enumerate() {
        let from = if pos == 0 {
            f64::NEG_INFINITY
        } else {
            intersect(lines[stack[pos - 1]], lines[idx])
        };
        let to = if pos + 1 == stack.len() {
            f64::INFINITY
        } else {
            intersect(lines[idx], lines[stack[pos + 1]])
        };
        segs.push(EnvelopeSegment {
            line: idx,
            theta_from: from,
            theta_to: to,
        });
    }
    segs
}

/// Computes both envelopes. A line is an envelope member iff it achieves
/// the pointwise maximum (upper) or minimum (lower) on a θ-interval of
/// positive length; exact duplicates of a member count as members too.
pub fn envelope_of_lines(f: &LineFamily) -> EnvelopeResult {
    let lines = f.lines();
    let upper = upper_hull(lines);
    let negated: Vec<Line> = lines
        .iter()
        .map(|l| Line {
            slope: -l.slope,
            intercept: -l.intercept,
        })
        .collect();
    let lower = upper_hull(&negated);

    let mut members: BTreeSet<usize> = upper.iter().chain(&lower).map(|s| s.line).collect();
    let reps: Vec<usize> = members.iter().copied().collect();
    for rep in reps {
        for (i, l) in lines.iter().enumerate() {
            if *l == lines[rep] {
                members.insert(i);
            }
        }
    }
    let redundant = (0..lines.len()).filter(|i| !members.contains(i)).collect();
    EnvelopeResult {
        upper,
        lower,
        redundant,
    }
}

/// Simplex cells reachable as limits of the family along some direction:
/// the union of upper- and lower-envelope members.
pub fn connected_vertices(f: &LineFamily) -> BTreeSet<usize> {
    let env = envelope_of_lines(f);
    (0..f.lines().len())
        .filter(|i| !env.redundant.contains(i))
        .collect()
}

/// Vertices of conv{X't : t in {0,1}^N} for a two-column design, walked
/// counterclockwise, each paired with a response pattern attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct SuffStatPolytope {
    vertices: Vec<[f64; 2]>,
    vertex_patterns: Vec<Vec<bool>>,
}

impl SuffStatPolytope {
    #[inline]
    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    #[inline]
    pub fn vertex_patterns(&self) -> &[Vec<bool>] {
        &self.vertex_patterns
    }

    /// Consecutive vertex pairs, cyclic. A 2-vertex polytope is a segment
    /// with a single edge; a single vertex has none.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self.vertices.len() {
            0 | 1 => Vec::new(),
            2 => vec![(0, 1)],
            n => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        }
    }
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

/// Builds the zonotope Σ_i [0, x_i] by the angular walk: generators are
/// flip-normalized into the upper half-plane, merged when collinear
/// (relative cross-product tolerance 1e−12), sorted by angle, and summed
/// up one chain and back down the other. Zero rows never move the hull and
/// are dropped from the walk; their pattern bits stay 0. Every emitted
/// vertex is recomputed as an exact row sum of its pattern.
pub fn suffstat_polytope_2d(design: &[Vec<f64>]) -> Result<SuffStatPolytope, PolytopeError> {
    if design.is_empty() {
        return Err(PolytopeError::EmptyDesign);
    }
    for (i, row) in design.iter().enumerate() {
        if row.len() != 2 {
            return Err(PolytopeError::DimensionError { got: row.len() });
        }
        if !(row[0].is_finite() && row[1].is_finite()) {
            return Err(PolytopeError::NonFiniteRow { row: i });
        }
    }
    let n = design.len();

    // flip generators into y > 0 or (y = 0, x > 0); a flipped generator
    // starts "on" in the base pattern
    let mut base_pattern = vec![false; n];
    let mut gens: Vec<([f64; 2], usize)> = Vec::new();
    for (i, row) in design.iter().enumerate() {
        let mut g = [row[0], row[1]];
        if g == [0.0, 0.0] {
            continue;
        }
        if g[1] < 0.0 || (g[1] == 0.0 && g[0] < 0.0) {
            g = [-g[0], -g[1]];
            base_pattern[i] = true;
        }
        gens.push((g, i));
    }

    let vertex_from = |pattern: &[bool]| -> [f64; 2] {
        let mut v = [0.0, 0.0];
        for (i, &on) in pattern.iter().enumerate() {
            if on {
                v[0] += design[i][0];
                v[1] += design[i][1];
            }
        }
        v
    };

    if gens.is_empty() {
        return Ok(SuffStatPolytope {
            vertices: vec![[0.0, 0.0]],
            vertex_patterns: vec![base_pattern],
        });
    }

    gens.sort_by(|a, b| {
        let aa = a.0[1].atan2(a.0[0]);
        let ab = b.0[1].atan2(b.0[0]);
        aa.partial_cmp(&ab).unwrap().then(a.1.cmp(&b.1))
    });

    // merge collinear runs; group identity is the first member's direction
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut lead = [0.0, 0.0];
    for &(g, i) in &gens {
        let norm = (g[0] * g[0] + g[1] * g[1]).sqrt();
        let unit = [g[0] / norm, g[1] / norm];
        if let Some(last) = groups.last_mut() {
            if cross(lead, unit).abs() <= 1e-12 {
                last.push(i);
                continue;
            }
        }
        lead = unit;
        groups.push(vec![i]);
    }

    let m = groups.len();
    let mut pattern = base_pattern;
    let mut vertices = vec![vertex_from(&pattern)];
    let mut patterns = vec![pattern.clone()];
    let toggle = |pattern: &mut Vec<bool>, group: &[usize]| {
        for &i in group {
            pattern[i] = !pattern[i];
        }
    };
    for group in &groups {
        toggle(&mut pattern, group);
        vertices.push(vertex_from(&pattern));
        patterns.push(pattern.clone());
    }
    // walk back down from the opposite corner; skip the last group, whose
    // toggle would land on the base vertex again
    for group in groups.iter().take(m - 1) {
        toggle(&mut pattern, group);
        vertices.push(vertex_from(&pattern));
        patterns.push(pattern.clone());
    }

    if m == 1 {
        vertices.truncate(2);
        patterns.truncate(2);
    }
    Ok(SuffStatPolytope {
        vertices,
        vertex_patterns: patterns,
    })
}

/// Result of a boundary distance query: the squared Mahalanobis distance,
/// the minimizing boundary point, and the edge carrying it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryDistance {
    pub dist_sq: f64,
    pub closest: [f64; 2],
    pub edge: (usize, usize),
}

/// Minimum of (z − center)' M (z − center) over the polytope boundary,
/// solved edge by edge: each edge is a 1-D quadratic in the edge parameter,
/// minimized exactly and clamped to [0, 1]. The center must be strictly
/// inside (counterclockwise cross test on every edge); a center on or past
/// an edge returns `CenterOutside` with distance 0 and that edge.
pub fn min_mahalanobis_to_polytope_boundary(
    p: &SuffStatPolytope,
    center: [f64; 2],
    metric: &SymmetricMatrix,
) -> Result<BoundaryDistance, PolytopeError> {
    if metric.dim() != 2 {
        return Err(PolytopeError::DimensionError { got: metric.dim() });
    }
    cholesky(metric)?;

    let verts = p.vertices();
    let edges = p.edges();
    if verts.len() < 3 {
        let edge = edges.first().copied().unwrap_or((0, 0));
        return Err(PolytopeError::CenterOutside { edge, dist_sq: 0.0 });
    }
    for &(a, b) in &edges {
        let turn = cross(sub(verts[b], verts[a]), sub(center, verts[a]));
        if turn <= 0.0 {
            return Err(PolytopeError::CenterOutside {
                edge: (a, b),
                dist_sq: 0.0,
            });
        }
    }

    let mut best: Option<BoundaryDistance> = None;
    for &(a, b) in &edges {
        let e = sub(verts[b], verts[a]);
        let w = sub(verts[a], center);
        let e_me = metric.quadratic_form(&e);
        let w_me: f64 = metric.mul_vec(&e).iter().zip(&w).map(|(x, y)| x * y).sum();
        let lambda = if e_me > 0.0 {
            (-w_me / e_me).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let z = [verts[a][0] + lambda * e[0], verts[a][1] + lambda * e[1]];
        let dz = sub(z, center);
        let d = metric.quadratic_form(&dz);
        if best.is_none_or(|bst| d < bst.dist_sq) {
            best = Some(BoundaryDistance {
                dist_sq: d,
                closest: z,
                edge: (a, b),
            });
        }
    }
    Ok(best.expect("polytope has edges"))
}
