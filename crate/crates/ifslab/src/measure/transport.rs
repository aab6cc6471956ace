//! The d_L metric: sup over 1-Lipschitz test functions, computed as the
//! Wasserstein-1 distance (Kantorovich duality on compact supports).

use super::DiscreteMeasure;
use crate::error::{Error, Result};
use crate::geometry::dist2;

/// Cap on atoms per side for the transport solver.
pub const ATOM_BUDGET: usize = 2000;

/// d_L between finite atom sets: 1D via the CDF-difference integral,
/// m >= 2 via successive shortest paths on the bipartite atom graph.
pub fn dl_distance(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<f64> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch(mu.dim(), nu.dim()));
    }
    let n = mu.atoms().len().max(nu.atoms().len());
    if n > ATOM_BUDGET {
        return Err(Error::Budget {
            what: "transport atoms",
            needed: n as u128,
            cap: ATOM_BUDGET as u128,
            largest_feasible_n: None,
        });
    }
    if mu.dim() == 1 {
        Ok(dl_1d(mu, nu))
    } else {
        Ok(wasserstein_ssp(mu, nu))
    }
}

/// Integral of |F_mu - F_nu| over the line (exact for step CDFs).
fn dl_1d(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
    let mut events: Vec<(f64, f64, f64)> = Vec::new(); // (x, dF_mu, dF_nu)
    for (p, w) in mu.atoms() {
        events.push((p[0].to_f64(), w.to_f64(), 0.0));
    }
    for (p, w) in nu.atoms() {
        events.push((p[0].to_f64(), 0.0, w.to_f64()));
    }
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut total = 0.0;
    let mut f_mu: f64 = 0.0;
    let mut f_nu: f64 = 0.0;
    let mut prev_x = events[0].0;
    for (x, dmu, dnu) in events {
        total += (f_mu - f_nu).abs() * (x - prev_x);
        f_mu += dmu;
        f_nu += dnu;
        prev_x = x;
    }
    total
}

/// Min-cost transport by successive shortest augmenting paths with
/// Johnson potentials; exact for the given float masses up to 1e-12
/// residual tolerance.
fn wasserstein_ssp(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
    let xs: Vec<(Vec<f64>, f64)> = mu
        .atoms()
        .iter()
        .map(|(p, w)| (p.iter().map(|s| s.to_f64()).collect(), w.to_f64()))
        .collect();
    let ys: Vec<(Vec<f64>, f64)> = nu
        .atoms()
        .iter()
        .map(|(p, w)| (p.iter().map(|s| s.to_f64()).collect(), w.to_f64()))
        .collect();
    let n1 = xs.len();
    let n2 = ys.len();
    let cost: Vec<Vec<f64>> = xs
        .iter()
        .map(|(x, _)| ys.iter().map(|(y, _)| dist2(x, y)).collect())
        .collect();
    let mut flow = vec![vec![0.0f64; n2]; n1];
    let mut rem_a: Vec<f64> = xs.iter().map(|(_, w)| *w).collect();
    let mut rem_b: Vec<f64> = ys.iter().map(|(_, w)| *w).collect();
    let mut pot_s = vec![0.0f64; n1];
    let mut pot_t = vec![0.0f64; n2];
    const EPS: f64 = 1e-12;
    loop {
        if rem_b.iter().sum::<f64>() <= EPS {
            break;
        }
        // Dijkstra over the bipartite residual graph with reduced costs
        let mut dist_s = vec![f64::INFINITY; n1];
        let mut dist_t = vec![f64::INFINITY; n2];
        let mut par_t = vec![usize::MAX; n2]; // source reaching this sink
        let mut par_s = vec![usize::MAX; n1]; // sink reaching this source (backward)
        let mut done_s = vec![false; n1];
        let mut done_t = vec![false; n2];
        for i in 0..n1 {
            if rem_a[i] > EPS {
                dist_s[i] = 0.0;
            }
        }
        loop {
            // pick the closest unfinished node on either side
            let mut best = f64::INFINITY;
            let mut pick: Option<(bool, usize)> = None; // (is_sink, idx)
            for i in 0..n1 {
                if !done_s[i] && dist_s[i] < best {
                    best = dist_s[i];
                    pick = Some((false, i));
                }
            }
            for j in 0..n2 {
                if !done_t[j] && dist_t[j] < best {
                    best = dist_t[j];
                    pick = Some((true, j));
                }
            }
            match pick {
                None => break,
                Some((false, i)) => {
                    done_s[i] = true;
                    for j in 0..n2 {
                        let rc = cost[i][j] + pot_s[i] - pot_t[j];
                        let nd = dist_s[i] + rc.max(0.0);
                        if nd < dist_t[j] {
                            dist_t[j] = nd;
                            par_t[j] = i;
                        }
                    }
                }
                Some((true, j)) => {
                    done_t[j] = true;
                    for i in 0..n1 {
                        if flow[i][j] > EPS {
                            let rc = -cost[i][j] + pot_t[j] - pot_s[i];
                            let nd = dist_t[j] + rc.max(0.0);
                            if nd < dist_s[i] {
                                dist_s[i] = nd;
                                par_s[i] = j;
                            }
                        }
                    }
                }
            }
        }
        // nearest sink with unmet demand
        let mut target = None;
        let mut best = f64::INFINITY;
        for j in 0..n2 {
            if rem_b[j] > EPS && dist_t[j] < best {
                best = dist_t[j];
                target = Some(j);
            }
        }
        let target = match target {
            Some(t) => t,
            None => break, // numerically exhausted
        };
        // backtrack, find bottleneck
        let mut path: Vec<(usize, usize, bool)> = Vec::new(); // (i, j, forward)
        let mut j = target;
        let mut bottleneck = rem_b[target];
        loop {
            let i = par_t[j];
            path.push((i, j, true));
            if par_s[i] == usize::MAX || dist_s[i] == 0.0 && rem_a[i] > EPS {
                bottleneck = bottleneck.min(rem_a[i]);
                break;
            }
            let jb = par_s[i];
            path.push((i, jb, false));
            bottleneck = bottleneck.min(flow[i][jb]);
            j = jb;
        }
        if bottleneck <= EPS {
            break;
        }
        for (i, jj, forward) in path {
            if forward {
                flow[i][jj] += bottleneck;
            } else {
                flow[i][jj] -= bottleneck;
            }
        }
        let (src, snk) = {
            // endpoints for supply/demand updates
            let mut jj = target;
            let mut ii;
            loop {
                ii = par_t[jj];
                if par_s[ii] == usize::MAX || dist_s[ii] == 0.0 && rem_a[ii] > EPS {
                    break;
                }
                jj = par_s[ii];
            }
            (ii, target)
        };
        rem_a[src] -= bottleneck;
        rem_b[snk] -= bottleneck;
        // Johnson potential update keeps reduced costs nonnegative
        for i in 0..n1 {
            if dist_s[i].is_finite() {
                pot_s[i] += dist_s[i];
            }
        }
        for j in 0..n2 {
            if dist_t[j].is_finite() {
                pot_t[j] += dist_t[j];
            }
        }
    }
    let mut total = 0.0;
    for i in 0..n1 {
        for j in 0..n2 {
            total += flow[i][j] * cost[i][j];
        }
    }
    total
}
