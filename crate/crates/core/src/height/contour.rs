use crate::family::Family;
use crate::par;
use crate::window::WindowBox;
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContourError {
    #[error("level must be positive and finite, got {0}")]
    InvalidLevel(f64),
    #[error("resolution must be at least 16, got {0}")]
    ResolutionTooSmall(usize),
}

const MIN_RESOLUTION: usize = 16;
const BISECTION_STEPS: usize = 40;

/// One connected component of a traced level set `{f = level}`.
///
/// Closed components are oriented counterclockwise, start at their
/// lexicographically smallest vertex, and do not repeat it at the end.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPolyline {
    pub level: f64,
    pub points: Vec<Complex64>,
    pub closed: bool,
}

impl BoundaryPolyline {
    /// Segments of the polyline, including the closing one when closed.
    pub fn segments(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.points.len();
        let count = if self.closed { n } else { n.saturating_sub(1) };
        (0..count).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    /// Even-odd point-in-polygon test; always false for open components.
    pub fn encloses(&self, z: Complex64) -> bool {
        if !self.closed {
            return false;
        }
        let mut inside = false;
        for (a, b) in self.segments() {
            if (a.im > z.im) != (b.im > z.im) {
                let x = a.re + (z.im - a.im) / (b.im - a.im) * (b.re - a.re);
                if x > z.re {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub fn signed_area(&self) -> f64 {
        self.segments().map(|(a, b)| a.re * b.im - b.re * a.im).sum::<f64>() * 0.5
    }
}

fn lex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Sublevel boundary `{height = level}` of a family's height function.
pub fn trace_boundary(
    family: Family,
    level: f64,
    window: &WindowBox,
    resolution: usize,
) -> Result<Vec<BoundaryPolyline>, ContourError> {
    trace_level_set(|z| super::height(family, z), level, window, resolution)
}

/// Marching-squares trace of `{f = level}` on a `resolution x resolution`
/// cell grid over `window`. Saddle cells are resolved by evaluating `f` at
/// the cell center; edge crossings are refined by bisection on `f`.
pub fn trace_level_set<F>(
    f: F,
    level: f64,
    window: &WindowBox,
    resolution: usize,
) -> Result<Vec<BoundaryPolyline>, ContourError>
where
    F: Fn(Complex64) -> f64 + Sync + Send,
{
    if !(level.is_finite() && level > 0.0) {
        return Err(ContourError::InvalidLevel(level));
    }
    if resolution < MIN_RESOLUTION {
        return Err(ContourError::ResolutionTooSmall(resolution));
    }
    let n = resolution;
    let dx = window.width() / n as f64;
    let dy = window.height() / n as f64;
    let lo = window.lo();
    let node = |i: usize, j: usize| Complex64::new(lo.re + i as f64 * dx, lo.im + j as f64 * dy);

    let values: Vec<Vec<f64>> = par::map_range(n + 1, |j| (0..=n).map(|i| f(node(i, j))).collect());
    let inside = |i: usize, j: usize| values[j][i] < level;

    // edge keys: horizontal (i,j)-(i+1,j) and vertical (i,j)-(i,j+1)
    let h_edge = |i: usize, j: usize| 2 * (j * (n + 1) + i);
    let v_edge = |i: usize, j: usize| 2 * (j * (n + 1) + i) + 1;

    let rows: Vec<Vec<(usize, usize)>> = par::map_range(n, |j| {
        let mut segs = Vec::new();
        for i in 0..n {
            let a = inside(i, j);
            let b = inside(i + 1, j);
            let c = inside(i + 1, j + 1);
            let d = inside(i, j + 1);
            let bottom = h_edge(i, j);
            let right = v_edge(i + 1, j);
            let top = h_edge(i, j + 1);
            let left = v_edge(i, j);
            let mut crossed = Vec::with_capacity(4);
            if a != b {
                crossed.push(bottom);
            }
            if b != c {
                crossed.push(right);
            }
            if c != d {
                crossed.push(top);
            }
            if d != a {
                crossed.push(left);
            }
            match crossed.len() {
                2 => segs.push((crossed[0], crossed[1])),
                4 => {
                    let center = node(i, j) + Complex64::new(0.5 * dx, 0.5 * dy);
                    if (f(center) < level) == a {
                        // a and c joined through the center: cut off b and d
                        segs.push((bottom, right));
                        segs.push((top, left));
                    } else {
                        segs.push((bottom, left));
                        segs.push((right, top));
                    }
                }
                _ => {}
            }
        }
        segs
    });
    let segments: Vec<(usize, usize)> = rows.into_iter().flatten().collect();
    if segments.is_empty() {
        return Ok(Vec::new());
    }

    let mut adjacency: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (s, &(e0, e1)) in segments.iter().enumerate() {
        adjacency.entry(e0).or_default().push(s);
        adjacency.entry(e1).or_default().push(s);
    }

    let edges: Vec<usize> = adjacency.keys().copied().collect();
    let locate = |key: usize| {
        let idx = key / 2;
        let (i, j) = (idx % (n + 1), idx / (n + 1));
        let (i1, j1) = if key % 2 == 0 { (i + 1, j) } else { (i, j + 1) };
        (node(i, j), values[j][i], node(i1, j1), values[j1][i1])
    };
    let points: Vec<Complex64> = par::map_slice(&edges, |&key| {
        let (p0, v0, p1, v1) = locate(key);
        refine_crossing(&f, level, p0, v0, p1, v1)
    });
    let point_of: BTreeMap<usize, Complex64> = edges.iter().copied().zip(points).collect();

    let mut used = vec![false; segments.len()];
    let mut components = Vec::new();
    let walk = |start_edge: usize, first_seg: usize, used: &mut Vec<bool>| {
        let mut chain = vec![start_edge];
        let mut edge = start_edge;
        let mut seg = first_seg;
        loop {
            used[seg] = true;
            let (e0, e1) = segments[seg];
            edge = if e0 == edge { e1 } else { e0 };
            if edge == start_edge {
                return (chain, true);
            }
            chain.push(edge);
            match adjacency[&edge].iter().find(|&&s| !used[s]) {
                Some(&next) => seg = next,
                None => return (chain, false),
            }
        }
    };
    // open chains start at degree-one edges on the window border
    for (&edge, segs) in &adjacency {
        if segs.len() == 1 && !used[segs[0]] {
            components.push(walk(edge, segs[0], &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            components.push(walk(segments[s].0, s, &mut used));
        }
    }

    let mut lines: Vec<BoundaryPolyline> = components
        .into_iter()
        .map(|(chain, closed)| {
            let mut pts: Vec<Complex64> = chain.iter().map(|e| point_of[e]).collect();
            pts.dedup();
            let mut line = BoundaryPolyline { level, points: pts, closed };
            normalize(&mut line);
            line
        })
        .collect();
    lines.sort_by(|a, b| lex(&a.points[0], &b.points[0]));
    Ok(lines)
}

fn refine_crossing<F: Fn(Complex64) -> f64>(
    f: &F,
    level: f64,
    mut p0: Complex64,
    mut v0: f64,
    mut p1: Complex64,
    mut v1: f64,
) -> Complex64 {
    let side0 = v0 < level;
    for _ in 0..BISECTION_STEPS {
        let mid = (p0 + p1) * 0.5;
        let vm = f(mid);
        if (vm < level) == side0 {
            p0 = mid;
            v0 = vm;
        } else {
            p1 = mid;
            v1 = vm;
        }
    }
    let t = if (v1 - v0).abs() > 0.0 { ((level - v0) / (v1 - v0)).clamp(0.0, 1.0) } else { 0.5 };
    p0 + (p1 - p0) * t
}

fn normalize(line: &mut BoundaryPolyline) {
    if line.closed {
        if line.points.len() > 1 && line.points.first() == line.points.last() {
            line.points.pop();
        }
        if line.signed_area() < 0.0 {
            line.points.reverse();
        }
        let start = (0..line.points.len())
            .min_by(|&a, &b| lex(&line.points[a], &line.points[b]))
            .unwrap_or(0);
        line.points.rotate_left(start);
    } else if let (Some(first), Some(last)) = (line.points.first(), line.points.last()) {
        if lex(last, first) == Ordering::Less {
            line.points.reverse();
        }
    }
}
