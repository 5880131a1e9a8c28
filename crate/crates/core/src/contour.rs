//! Marching-squares extraction of the zero level set of a scalar field, with
//! each emitted vertex refined onto the level set along its grid edge.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::geometry::Point2;
use crate::roots::bracketed_root_with;

/// Grid edge id: `(vertical, i, j)`; horizontal edges run from node `(i, j)`
/// to `(i + 1, j)`, vertical ones from `(i, j)` to `(i, j + 1)`.
type EdgeKey = (bool, usize, usize);

/// Extracts `f = 0` over the box `[min, max]` on an `n x n` cell grid.
///
/// `f` returns `None` where the field is undefined (inside obstacles);
/// cells touching such nodes are skipped. Vertices whose refined residual
/// exceeds `tol` are dropped, splitting the polyline there. Output is
/// deterministic regardless of thread count.
pub fn zero_contour<F>(f: F, min: Point2, max: Point2, n: usize, tol: f64) -> Vec<Vec<Point2>>
where
    F: Fn(Point2) -> Option<f64> + Sync,
{
    let n = n.max(2);
    let hx = (max.x - min.x) / n as f64;
    let hy = (max.y - min.y) / n as f64;
    let node = |i: usize, j: usize| Point2::new(min.x + hx * i as f64, min.y + hy * j as f64);
    let values: Vec<f64> = (0..(n + 1) * (n + 1))
        .into_par_iter()
        .map(|k| f(node(k % (n + 1), k / (n + 1))).unwrap_or(f64::NAN))
        .collect();
    let val = |i: usize, j: usize| values[j * (n + 1) + i];

    let mut adjacency: BTreeMap<EdgeKey, Vec<EdgeKey>> = BTreeMap::new();
    let mut link = |a: EdgeKey, b: EdgeKey| {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    };
    for j in 0..n {
        for i in 0..n {
            let c = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            if c.iter().any(|v| v.is_nan()) {
                continue;
            }
            let pos = c.map(|v| v > 0.0);
            // edges: bottom, right, top, left
            let keys = [(false, i, j), (true, i + 1, j), (false, i, j + 1), (true, i, j)];
            let crossed: Vec<usize> = (0..4).filter(|&e| pos[e] != pos[(e + 1) % 4]).collect();
            match crossed.len() {
                2 => link(keys[crossed[0]], keys[crossed[1]]),
                4 => {
                    let center = 0.25 * c.iter().sum::<f64>() > 0.0;
                    // cut off the corners whose sign differs from the center
                    for corner in 0..4 {
                        if pos[corner] != center {
                            let before = (corner + 3) % 4;
                            link(keys[before], keys[corner]);
                        }
                    }
                }
                _ => {}
            }
        }
    }

    let point_of = |key: &EdgeKey| -> Option<Point2> {
        let (vertical, i, j) = *key;
        let a = node(i, j);
        let (b, va, vb) = if vertical {
            (node(i, j + 1), val(i, j), val(i, j + 1))
        } else {
            (node(i + 1, j), val(i, j), val(i + 1, j))
        };
        let g = |t: f64| f(a.lerp(b, t)).unwrap_or(f64::NAN);
        let t = bracketed_root_with(g, 0.0, va, 1.0, vb).ok()?;
        let p = a.lerp(b, t);
        match f(p) {
            Some(r) if r.abs() <= tol => Some(p),
            _ => None,
        }
    };
    let keys: Vec<EdgeKey> = adjacency.keys().copied().collect();
    let points: BTreeMap<EdgeKey, Option<Point2>> =
        keys.par_iter().map(|k| (*k, point_of(k))).collect::<Vec<_>>().into_iter().collect();

    let mut visited: BTreeMap<EdgeKey, bool> = keys.iter().map(|k| (*k, false)).collect();
    let mut chains: Vec<Vec<EdgeKey>> = Vec::new();
    // open chains start at degree-1 keys; what remains are closed loops
    let starts: Vec<EdgeKey> = keys
        .iter()
        .filter(|k| adjacency[k].len() == 1)
        .chain(keys.iter())
        .copied()
        .collect();
    for start in starts {
        if visited[&start] {
            continue;
        }
        let mut chain = vec![start];
        visited.insert(start, true);
        let mut cur = start;
        loop {
            let next = adjacency[&cur].iter().find(|k| !visited[*k]).copied();
            match next {
                Some(k) => {
                    visited.insert(k, true);
                    chain.push(k);
                    cur = k;
                }
                None => {
                    if chain.len() > 2 && adjacency[&cur].contains(&start) {
                        chain.push(start);
                    }
                    break;
                }
            }
        }
        chains.push(chain);
    }

    let mut out = Vec::new();
    for chain in chains {
        let mut run: Vec<Point2> = Vec::new();
        for k in &chain {
            match points[k] {
                Some(p) => run.push(p),
                None => {
                    if run.len() >= 2 {
                        out.push(std::mem::take(&mut run));
                    }
                    run.clear();
                }
            }
        }
        if run.len() >= 2 {
            out.push(run);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_contour() {
        let f = |p: Point2| Some(1.0 - p.norm());
        let lines = zero_contour(f, Point2::new(-2.0, -2.0), Point2::new(2.0, 2.0), 64, 1e-10);
        assert_eq!(lines.len(), 1);
        let l = &lines[0];
        assert_eq!(l.first(), l.last());
        assert!(l.iter().all(|p| (p.norm() - 1.0).abs() <= 1e-10));
    }

    #[test]
    fn undefined_nodes_split_contour() {
        let f = |p: Point2| if p.x > 0.0 && p.y.abs() < 0.2 { None } else { Some(1.0 - p.norm()) };
        let lines = zero_contour(f, Point2::new(-2.0, -2.0), Point2::new(2.0, 2.0), 64, 1e-10);
        assert_eq!(lines.len(), 1);
        assert_ne!(lines[0].first(), lines[0].last());
    }
}
