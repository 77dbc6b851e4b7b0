//! Property checks for the boundary geometry: envelope membership against a
//! dense grid scan, zonotope vertices against brute-force hulls of all 2^N
//! sufficient statistics, and the Mahalanobis minimizer against dense
//! boundary sampling.

mod common;

use brink_core::polytope::{
    envelope_of_lines, min_mahalanobis_to_polytope_boundary, suffstat_polytope_2d, LineFamily,
    SuffStatPolytope,
};
use brink_core::RngStream;
use common::{random_spd, rng, uniform_in};
use std::collections::BTreeSet;

fn random_family(r: &mut RngStream, max_lines: usize) -> LineFamily {
    let n = 2 + (r.next_u64() as usize) % (max_lines - 1);
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|_| (uniform_in(r, -5.0, 5.0), uniform_in(r, -5.0, 5.0)))
        .collect();
    LineFamily::from_pairs(&pairs).unwrap()
}

/// Envelope membership oracle: a line is an upper member iff it is the
/// unique pointwise maximum somewhere on a dense theta grid (ties skipped;
/// random slopes make real ties vanishingly thin).
fn grid_members(pairs: &[(f64, f64)], upper: bool) -> BTreeSet<usize> {
    let mut hits = BTreeSet::new();
    let steps = 20_000;
    for i in 0..=steps {
        let theta = -1000.0 + 2000.0 * i as f64 / steps as f64;
        let vals: Vec<f64> = pairs.iter().map(|&(s, c)| s * theta + c).collect();
        let best = if upper {
            vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        } else {
            vals.iter().cloned().fold(f64::INFINITY, f64::min)
        };
        let close: Vec<usize> = (0..vals.len())
            .filter(|&j| (vals[j] - best).abs() <= 1e-9 * (1.0 + best.abs()))
            .collect();
        if close.len() == 1 {
            hits.insert(close[0]);
        }
    }
    hits
}

#[test]
fn envelope_membership_matches_grid_scan() {
    let mut r = rng(30);
    for trial in 0..1000 {
        let f = random_family(&mut r, 10);
        let pairs: Vec<(f64, f64)> = f.lines().iter().map(|l| (l.slope, l.intercept)).collect();
        let env = envelope_of_lines(&f);

        let upper_mine: BTreeSet<usize> = env.upper.iter().map(|s| s.line).collect();
        let lower_mine: BTreeSet<usize> = env.lower.iter().map(|s| s.line).collect();

        // every line the grid sees as a unique extremum must be a member
        for j in grid_members(&pairs, true) {
            assert!(
                upper_mine.contains(&j),
                "trial {trial}: grid found upper line {j}"
            );
        }
        for j in grid_members(&pairs, false) {
            assert!(
                lower_mine.contains(&j),
                "trial {trial}: grid found lower line {j}"
            );
        }

        // every reported segment must actually achieve the extremum at its
        // own midpoint (tails probed at a far-out point)
        for (segs, upper) in [(&env.upper, true), (&env.lower, false)] {
            for seg in segs.iter() {
                let theta = match (seg.theta_from.is_finite(), seg.theta_to.is_finite()) {
                    (true, true) => 0.5 * (seg.theta_from + seg.theta_to),
                    (false, true) => seg.theta_to - 1e4,
                    (true, false) => seg.theta_from + 1e4,
                    (false, false) => 0.0,
                };
                let vals: Vec<f64> = pairs.iter().map(|&(s, c)| s * theta + c).collect();
                let mine = vals[seg.line];
                let best = if upper {
                    vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                } else {
                    vals.iter().cloned().fold(f64::INFINITY, f64::min)
                };
                assert!(
                    (mine - best).abs() <= 1e-7 * (1.0 + best.abs()),
                    "trial {trial}: segment of line {} not extremal at {theta}",
                    seg.line
                );
            }
        }

        // redundant is the exact complement of the members
        let members: BTreeSet<usize> = upper_mine.union(&lower_mine).cloned().collect();
        let complement: BTreeSet<usize> =
            (0..pairs.len()).filter(|i| !members.contains(i)).collect();
        assert_eq!(env.redundant, complement, "trial {trial}");
    }
}

/// Extreme points of a 2-D point set by monotone chain, dropping collinear
/// boundary points. Returns them in counterclockwise order.
fn brute_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-9 && (a[1] - b[1]).abs() < 1e-9);
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 1e-9 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 1e-9 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn all_suffstats(x: &[Vec<f64>]) -> Vec<[f64; 2]> {
    let n = x.len();
    (0u32..(1 << n))
        .map(|mask| {
            let mut s = [0.0, 0.0];
            for (i, row) in x.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s[0] += row[0];
                    s[1] += row[1];
                }
            }
            s
        })
        .collect()
}

fn as_sorted_set(vs: &[[f64; 2]]) -> Vec<[i64; 2]> {
    // quantize for set comparison; inputs here are O(10) in magnitude
    let mut q: Vec<[i64; 2]> = vs
        .iter()
        .map(|v| [(v[0] * 1e9).round() as i64, (v[1] * 1e9).round() as i64])
        .collect();
    q.sort();
    q.dedup();
    q
}

fn random_rows(r: &mut RngStream, n: usize, integral: bool) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| loop {
            let row = if integral {
                vec![
                    (r.next_u64() % 7) as f64 - 3.0,
                    (r.next_u64() % 7) as f64 - 3.0,
                ]
            } else {
                vec![uniform_in(r, -2.0, 2.0), uniform_in(r, -2.0, 2.0)]
            };
            if row[0] != 0.0 || row[1] != 0.0 {
                break row;
            }
        })
        .collect()
}

#[test]
fn zonotope_vertices_match_brute_force_hull() {
    let mut r = rng(31);
    for trial in 0..300 {
        let n = 1 + (r.next_u64() % 12) as usize;
        let x = random_rows(&mut r, n, trial % 3 == 0);

        let p = suffstat_polytope_2d(&x).unwrap();
        let mine = as_sorted_set(p.vertices());
        let brute = as_sorted_set(&brute_hull(&all_suffstats(&x)));
        assert_eq!(mine, brute, "trial {trial}: design {x:?}");

        // each vertex is reproduced exactly by its own response pattern
        for (v, pat) in p.vertices().iter().zip(p.vertex_patterns()) {
            let mut s = [0.0, 0.0];
            for (i, row) in x.iter().enumerate() {
                if pat[i] {
                    s[0] += row[0];
                    s[1] += row[1];
                }
            }
            assert_eq!(
                *v, s,
                "trial {trial}: pattern does not reproduce its vertex"
            );
        }
    }
}

fn is_threshold(bits: &[bool]) -> bool {
    let flips = bits.windows(2).filter(|w| w[0] != w[1]).count();
    flips <= 1
}

#[test]
fn monotone_designs_give_threshold_patterns() {
    let mut r = rng(32);
    for trial in 0..100 {
        let n = 2 + (r.next_u64() % 9) as usize;
        // strictly increasing covariate with gaps bounded away from 0
        let mut c = uniform_in(&mut r, -3.0, -1.0);
        let x: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                c += uniform_in(&mut r, 0.05, 1.0);
                vec![1.0, c]
            })
            .collect();
        let p = suffstat_polytope_2d(&x).unwrap();
        for pat in p.vertex_patterns() {
            assert!(
                is_threshold(pat),
                "trial {trial}: pattern {pat:?} is not of threshold form"
            );
        }
        assert_eq!(p.vertices().len(), 2 * n, "trial {trial}");
    }
}

fn random_polytope(r: &mut RngStream) -> SuffStatPolytope {
    loop {
        let n = 3 + (r.next_u64() % 6) as usize;
        let x = random_rows(r, n, false);
        let p = suffstat_polytope_2d(&x).unwrap();
        if p.vertices().len() >= 3 {
            return p;
        }
    }
}

fn centroid(p: &SuffStatPolytope) -> [f64; 2] {
    let n = p.vertices().len() as f64;
    let mut c = [0.0, 0.0];
    for v in p.vertices() {
        c[0] += v[0] / n;
        c[1] += v[1] / n;
    }
    c
}

#[test]
fn mahalanobis_matches_dense_boundary_sampling() {
    let mut r = rng(33);
    for trial in 0..25 {
        let p = random_polytope(&mut r);
        let center = centroid(&p);
        let metric = random_spd(&mut r, 2, 0.1);

        let got = min_mahalanobis_to_polytope_boundary(&p, center, &metric).unwrap();

        let verts = p.vertices();
        let edges = p.edges();
        let per_edge = 100_000 / edges.len();
        let mut best = f64::INFINITY;
        for &(a, b) in &edges {
            let (va, vb) = (verts[a], verts[b]);
            for s in 0..=per_edge {
                let lam = s as f64 / per_edge as f64;
                let z = [
                    va[0] + lam * (vb[0] - va[0]) - center[0],
                    va[1] + lam * (vb[1] - va[1]) - center[1],
                ];
                best = best.min(metric.quadratic_form(&z));
            }
        }

        // the sampled minimum can only overshoot the true one
        assert!(got.dist_sq <= best + 1e-12, "trial {trial}");
        assert!(
            best - got.dist_sq <= 1e-4 * (1.0 + best),
            "trial {trial}: sampled {best} vs exact {}",
            got.dist_sq
        );
    }
}

#[test]
fn closest_point_lies_on_its_reported_edge() {
    let mut r = rng(34);
    for trial in 0..100 {
        let p = random_polytope(&mut r);
        let center = centroid(&p);
        let metric = random_spd(&mut r, 2, 0.05);
        let got = min_mahalanobis_to_polytope_boundary(&p, center, &metric).unwrap();

        let edges = p.edges();
        assert!(
            edges.contains(&got.edge),
            "trial {trial}: reported edge {:?} not in the edge list",
            got.edge
        );
        let (va, vb) = (p.vertices()[got.edge.0], p.vertices()[got.edge.1]);
        let e = [vb[0] - va[0], vb[1] - va[1]];
        let w = [got.closest[0] - va[0], got.closest[1] - va[1]];
        let lam = (w[0] * e[0] + w[1] * e[1]) / (e[0] * e[0] + e[1] * e[1]);
        assert!(
            (-1e-12..=1.0 + 1e-12).contains(&lam),
            "trial {trial}: lambda {lam}"
        );
        let on = [va[0] + lam * e[0], va[1] + lam * e[1]];
        let res = ((got.closest[0] - on[0]).powi(2) + (got.closest[1] - on[1]).powi(2)).sqrt();
        assert!(res <= 1e-10, "trial {trial}: residual {res}");
    }
}

#[test]
fn power_of_two_metric_scaling_is_bitwise_exact() {
    let mut r = rng(35);
    for _ in 0..50 {
        let p = random_polytope(&mut r);
        let center = centroid(&p);
        let metric = random_spd(&mut r, 2, 0.05);
        let r1 = min_mahalanobis_to_polytope_boundary(&p, center, &metric).unwrap();
        let r2 = min_mahalanobis_to_polytope_boundary(&p, center, &metric.scaled(4.0)).unwrap();
        assert_eq!(r2.dist_sq, 4.0 * r1.dist_sq);
        assert_eq!(r1.closest, r2.closest);
        assert_eq!(r1.edge, r2.edge);
    }
}
