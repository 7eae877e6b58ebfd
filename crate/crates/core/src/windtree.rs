//! The wind-tree model: a unit-speed particle in the plane bouncing off a
//! `Z²`-periodic array of `a × b` rectangles centred in the unit cells.
//!
//! The simulation is event driven. The particle position is kept as an
//! integer cell plus a local offset in `[0, 1]²`, so precision does not
//! degrade as the particle wanders off. Reflections only flip the sign of a
//! velocity component, so the speed is exactly conserved.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

/// Distance from a scatterer corner under which a hit counts as a corner hit.
pub const CORNER_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum WindTreeError {
    #[error("scatterer sides must lie in (0, 1], got a = {0}, b = {1}")]
    BadSize(f64, f64),
    #[error("direction must be a nonzero finite vector")]
    BadDirection,
    #[error("path length must be positive and finite")]
    BadLength,
    #[error("start point must lie in the unit cell outside the scatterer")]
    BadStart,
    #[error("series spans {0:.2} decades; at least 3 are needed")]
    InsufficientRange(f64),
    #[error("window must be positive")]
    BadWindow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindTreeConfig {
    pub a: f64,
    pub b: f64,
    /// Start point in the unit cell `[0, 1)²`.
    pub start: (f64, f64),
    /// Direction; normalised before use.
    pub dir: (f64, f64),
    pub t_total: f64,
}

/// Particle state: cell, offset in the cell, and unit velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub cell: (i64, i64),
    pub local: (f64, f64),
    pub vel: (f64, f64),
}

impl State {
    pub fn position(&self) -> (f64, f64) {
        (
            self.cell.0 as f64 + self.local.0,
            self.cell.1 as f64 + self.local.1,
        )
    }

    /// `self - other` as a plane vector, computed cell-wise for accuracy.
    pub fn offset_from(&self, other: &State) -> (f64, f64) {
        (
            (self.cell.0 - other.cell.0) as f64 + (self.local.0 - other.local.0),
            (self.cell.1 - other.cell.1) as f64 + (self.local.1 - other.local.1),
        )
    }

    pub fn reversed(&self) -> State {
        State {
            vel: (-self.vel.0, -self.vel.1),
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    /// Displacement from the start.
    pub position: (f64, f64),
    pub max_displacement: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunEnd {
    Complete,
    /// Stopped on a scatterer corner at this path length.
    CornerHit(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementSeries {
    pub samples: Vec<Sample>,
    pub events: u64,
    pub collisions: u64,
    pub end: RunEnd,
    pub final_state: State,
    /// Largest `| |v| - 1 |` seen at any event.
    pub speed_drift: f64,
}

impl DisplacementSeries {
    pub fn complete(&self) -> bool {
        self.end == RunEnd::Complete
    }
}

/// Sample times `T·2^-k` for `k = 0, 1, …` down to `t ≥ 1`, ascending.
pub fn schedule(t_total: f64) -> Vec<f64> {
    let mut out = vec![t_total];
    let mut t = t_total / 2.0;
    while t >= 1.0 {
        out.push(t);
        t /= 2.0;
    }
    out.reverse();
    out
}

fn validate(cfg: &WindTreeConfig) -> Result<State, WindTreeError> {
    let (a, b) = (cfg.a, cfg.b);
    if !(a > 0.0 && a <= 1.0 && b > 0.0 && b <= 1.0) {
        return Err(WindTreeError::BadSize(a, b));
    }
    let (dx, dy) = cfg.dir;
    let n = dx.hypot(dy);
    if !(n > 0.0 && n.is_finite()) {
        return Err(WindTreeError::BadDirection);
    }
    if !(cfg.t_total > 0.0 && cfg.t_total.is_finite()) {
        return Err(WindTreeError::BadLength);
    }
    let (x, y) = cfg.start;
    let in_cell = (0.0..1.0).contains(&x) && (0.0..1.0).contains(&y);
    if !in_cell || in_closed_scatterer(a, b, x, y) {
        return Err(WindTreeError::BadStart);
    }
    Ok(State {
        cell: (0, 0),
        local: (x, y),
        vel: (dx / n, dy / n),
    })
}

fn in_closed_scatterer(a: f64, b: f64, x: f64, y: f64) -> bool {
    let (x0, x1, y0, y1) = bounds(a, b);
    x >= x0 && x <= x1 && y >= y0 && y <= y1
}

fn bounds(a: f64, b: f64) -> (f64, f64, f64, f64) {
    (
        (1.0 - a) / 2.0,
        (1.0 + a) / 2.0,
        (1.0 - b) / 2.0,
        (1.0 + b) / 2.0,
    )
}

pub fn simulate(cfg: &WindTreeConfig) -> Result<DisplacementSeries, WindTreeError> {
    let start = validate(cfg)?;
    Ok(simulate_from(cfg.a, cfg.b, start, cfg.t_total))
}

/// Run from an arbitrary state for path length `t_total`.
pub fn simulate_from(a: f64, b: f64, start: State, t_total: f64) -> DisplacementSeries {
    run(a, b, start, t_total, None)
}

/// The run of `cfg` together with the polyline through its collision points.
pub fn trace(cfg: &WindTreeConfig) -> Result<(DisplacementSeries, Vec<(f64, f64)>), WindTreeError> {
    let start = validate(cfg)?;
    let mut pts = vec![start.position()];
    let series = run(cfg.a, cfg.b, start, cfg.t_total, Some(&mut pts));
    pts.push(series.final_state.position());
    Ok((series, pts))
}

fn run(
    a: f64,
    b: f64,
    start: State,
    t_total: f64,
    mut trace: Option<&mut Vec<(f64, f64)>>,
) -> DisplacementSeries {
    let (x0, x1, y0, y1) = bounds(a, b);
    let times = schedule(t_total);
    let mut next_sample = 0;
    let mut samples = Vec::with_capacity(times.len());
    let mut s = start;
    let mut t = 0.0f64;
    let mut max_disp = 0.0f64;
    let (mut events, mut collisions) = (0u64, 0u64);
    let mut drift = 0.0f64;
    let mut end = RunEnd::Complete;
    let disp = |st: &State, dt: f64| {
        let (ox, oy) = st.offset_from(&start);
        (ox + dt * st.vel.0, oy + dt * st.vel.1)
    };
    loop {
        let (x, y) = s.local;
        let (vx, vy) = s.vel;
        // time to leave the cell through each axis
        let tx = if vx > 0.0 {
            (1.0 - x) / vx
        } else if vx < 0.0 {
            -x / vx
        } else {
            f64::INFINITY
        };
        let ty = if vy > 0.0 {
            (1.0 - y) / vy
        } else if vy < 0.0 {
            -y / vy
        } else {
            f64::INFINITY
        };
        // time to hit the scatterer, with the side that is hit
        let mut hit: Option<(f64, bool)> = None; // (time, hits a vertical side)
        if vx != 0.0 {
            let side = if vx > 0.0 { x0 } else { x1 };
            let th = (side - x) / vx;
            if th > 0.0 {
                let yh = y + th * vy;
                if yh >= y0 - CORNER_TOL && yh <= y1 + CORNER_TOL {
                    hit = Some((th, true));
                }
            }
        }
        if vy != 0.0 {
            let side = if vy > 0.0 { y0 } else { y1 };
            let th = (side - y) / vy;
            if th > 0.0 {
                let xh = x + th * vx;
                if xh >= x0 - CORNER_TOL && xh <= x1 + CORNER_TOL && hit.is_none_or(|(h, _)| th < h)
                {
                    hit = Some((th, false));
                }
            }
        }
        let cell_exit = tx.min(ty);
        let (dt, event) = match hit {
            Some((th, vertical)) if th <= cell_exit => (th, Some(vertical)),
            _ => (cell_exit, None),
        };
        // samples falling inside this step
        while next_sample < times.len() && times[next_sample] <= t + dt {
            let ts = times[next_sample];
            let p = disp(&s, ts - t);
            max_disp = max_disp.max(p.0.hypot(p.1));
            samples.push(Sample {
                t: ts,
                position: p,
                max_displacement: max_disp,
            });
            next_sample += 1;
        }
        if next_sample == times.len() {
            let rest = t_total - t;
            s.local = (x + rest * vx, y + rest * vy);
            break;
        }
        t += dt;
        let (nx, ny) = (x + dt * vx, y + dt * vy);
        events += 1;
        match event {
            Some(vertical) => {
                let corner = if vertical {
                    (ny - y0).abs() <= CORNER_TOL || (ny - y1).abs() <= CORNER_TOL
                } else {
                    (nx - x0).abs() <= CORNER_TOL || (nx - x1).abs() <= CORNER_TOL
                };
                if vertical {
                    s.local = (if vx > 0.0 { x0 } else { x1 }, ny);
                    s.vel.0 = -vx;
                } else {
                    s.local = (nx, if vy > 0.0 { y0 } else { y1 });
                    s.vel.1 = -vy;
                }
                collisions += 1;
                if let Some(pts) = trace.as_mut() {
                    pts.push(s.position());
                }
                if corner {
                    end = RunEnd::CornerHit(t);
                    break;
                }
            }
            None => {
                let (mut lx, mut ly) = (nx, ny);
                if tx <= ty {
                    if vx > 0.0 {
                        s.cell.0 += 1;
                        lx = 0.0;
                    } else {
                        s.cell.0 -= 1;
                        lx = 1.0;
                    }
                }
                if ty <= tx {
                    if vy > 0.0 {
                        s.cell.1 += 1;
                        ly = 0.0;
                    } else {
                        s.cell.1 -= 1;
                        ly = 1.0;
                    }
                }
                s.local = (lx, ly);
            }
        }
        let p = s.offset_from(&start);
        max_disp = max_disp.max(p.0.hypot(p.1));
        drift = drift.max((s.vel.0.hypot(s.vel.1) - 1.0).abs());
    }
    DisplacementSeries {
        samples,
        events,
        collisions,
        end,
        final_state: s,
        speed_drift: drift,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentEstimate {
    pub estimate: f64,
    /// 95% bootstrap interval.
    pub ci: (f64, f64),
}

/// Least-squares slope of `log(max displacement)` against `log t` over the
/// samples with `t ≥ t_max / 10^window`, with a bootstrap interval over
/// resampled points.
pub fn diffusion_exponent(
    series: &DisplacementSeries,
    window: f64,
) -> Result<ExponentEstimate, WindTreeError> {
    let pts: Vec<(f64, f64)> = series
        .samples
        .iter()
        .filter(|s| s.max_displacement > 0.0)
        .map(|s| (s.t.ln(), s.max_displacement.ln()))
        .collect();
    exponent_from_logs(&pts, window)
}

fn exponent_from_logs(pts: &[(f64, f64)], window: f64) -> Result<ExponentEstimate, WindTreeError> {
    if !(window > 0.0) {
        return Err(WindTreeError::BadWindow);
    }
    let (lo, hi) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.0), b.max(p.0))
        });
    let decades = if pts.is_empty() {
        0.0
    } else {
        (hi - lo) / std::f64::consts::LN_10
    };
    if decades < 3.0 - 1e-9 {
        return Err(WindTreeError::InsufficientRange(decades.max(0.0)));
    }
    let cut = hi - window * std::f64::consts::LN_10;
    let used: Vec<(f64, f64)> = pts.iter().copied().filter(|p| p.0 >= cut - 1e-12).collect();
    let estimate = slope(&used);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut boots: Vec<f64> = (0..400)
        .filter_map(|_| {
            let sample: Vec<(f64, f64)> = (0..used.len())
                .map(|_| used[rng.gen_range(0..used.len())])
                .collect();
            let s = slope(&sample);
            s.is_finite().then_some(s)
        })
        .collect();
    boots.sort_by(f64::total_cmp);
    let ci = if boots.is_empty() {
        (estimate, estimate)
    } else {
        let at = |q: f64| boots[((boots.len() - 1) as f64 * q).round() as usize];
        (at(0.025), at(0.975))
    };
    Ok(ExponentEstimate { estimate, ci })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    sxy / sxx
}

/// Random configurations: uniform direction and a uniform start outside the
/// scatterer, one per run, drawn from a seeded generator.
pub fn random_configs(a: f64, b: f64, t_total: f64, runs: usize, seed: u64) -> Vec<WindTreeConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..runs)
        .map(|_| {
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let start = loop {
                let (x, y): (f64, f64) = (rng.gen(), rng.gen());
                if !in_closed_scatterer(a, b, x, y) {
                    break (x, y);
                }
            };
            WindTreeConfig {
                a,
                b,
                start,
                dir: (theta.cos(), theta.sin()),
                t_total,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub runs: Vec<DisplacementSeries>,
    /// Exponent fitted to the mean of `log(max displacement)` over runs.
    pub exponent: ExponentEstimate,
    pub corner_hits: usize,
}

/// Simulate many runs in parallel and fit one exponent to their average.
/// Runs cut short by a corner hit are excluded from the fit.
pub fn ensemble(cfgs: &[WindTreeConfig], window: f64) -> Result<Ensemble, WindTreeError> {
    let runs: Vec<DisplacementSeries> = cfgs.par_iter().map(simulate).collect::<Result<_, _>>()?;
    let good: Vec<&DisplacementSeries> = runs.iter().filter(|r| r.complete()).collect();
    let corner_hits = runs.len() - good.len();
    let pts: Vec<(f64, f64)> = match good.first() {
        None => Vec::new(),
        Some(first) => (0..first.samples.len())
            .filter_map(|i| {
                let logs: Vec<f64> = good
                    .iter()
                    .map(|r| r.samples[i].max_displacement)
                    .filter(|&m| m > 0.0)
                    .map(f64::ln)
                    .collect();
                (logs.len() == good.len()).then(|| {
                    (
                        first.samples[i].t.ln(),
                        logs.iter().sum::<f64>() / logs.len() as f64,
                    )
                })
            })
            .collect(),
    };
    let exponent = exponent_from_logs(&pts, window)?;
    Ok(Ensemble {
        runs,
        exponent,
        corner_hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dir: (f64, f64), start: (f64, f64), t: f64) -> WindTreeConfig {
        WindTreeConfig {
            a: 0.5,
            b: 0.5,
            start,
            dir,
            t_total: t,
        }
    }

    #[test]
    fn ballistic_channel() {
        let s = simulate(&cfg((1.0, 0.0), (0.3, 0.1), 1e4)).unwrap();
        assert_eq!(s.collisions, 0);
        for x in &s.samples {
            assert!((x.max_displacement - x.t).abs() < 1e-9 * x.t);
        }
        let e = diffusion_exponent(&s, 3.0).unwrap();
        assert!((e.estimate - 1.0).abs() < 0.01);
    }

    #[test]
    fn trace_matches_run() {
        let c = cfg((0.6, 0.8), (0.1, 0.2), 50.0);
        let (series, pts) = trace(&c).unwrap();
        assert_eq!(series, simulate(&c).unwrap());
        assert_eq!(pts.len() as u64, series.collisions + 2);
        let len: f64 = pts
            .windows(2)
            .map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1))
            .sum();
        assert!(len <= 50.0 + 1e-9);
    }

    #[test]
    fn invariants_hold() {
        let s = simulate(&cfg((0.6, (1.0f64 - 0.36).sqrt()), (0.1, 0.2), 1e5)).unwrap();
        assert!(s.complete());
        assert_eq!(s.speed_drift, 0.0);
        let w = s.samples.windows(2);
        for pair in w {
            assert!(pair[1].max_displacement >= pair[0].max_displacement);
            let (a, b) = (&pair[0], &pair[1]);
            let d = (b.position.0 - a.position.0).hypot(b.position.1 - a.position.1);
            assert!(d <= b.t - a.t + 1e-9);
        }
        let (x, y) = s.final_state.local;
        assert!(
            !in_closed_scatterer(0.5, 0.5, x, y)
                || x == 0.25
                || x == 0.75
                || y == 0.25
                || y == 0.75
        );
    }

    #[test]
    fn reversal_returns() {
        let c = cfg((0.3, 0.7), (0.1, 0.2), 1e5);
        let fwd = simulate(&c).unwrap();
        let back = simulate_from(0.5, 0.5, fwd.final_state.reversed(), 1e5);
        let start = State {
            cell: (0, 0),
            local: c.start,
            vel: (0.0, 0.0),
        };
        let (dx, dy) = back.final_state.offset_from(&start);
        assert!(dx.hypot(dy) < 1e-6 * 1e5);
    }

    #[test]
    fn mirror_symmetry() {
        let (c, s) = (0.8f64, 0.6f64);
        let a = simulate(&cfg((c, s), (0.1, 0.15), 1e4)).unwrap();
        let b = simulate(&cfg((c, -s), (0.1, 0.85), 1e4)).unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert!((x.max_displacement - y.max_displacement).abs() < 1e-6);
            assert!((x.position.1 + y.position.1).abs() < 1e-6);
        }
    }

    #[test]
    fn confined_when_scatterers_fill_rows() {
        // a = 1: the scatterers join into horizontal walls
        let c = WindTreeConfig {
            a: 1.0,
            b: 0.5,
            start: (0.5, 0.1),
            dir: (0.3, 0.9),
            t_total: 1e4,
        };
        let s = simulate(&c).unwrap();
        assert!(s.samples.iter().all(|x| x.position.1.abs() <= 0.5 + 1e-9));
    }

    #[test]
    fn config_errors() {
        assert_eq!(
            simulate(&cfg((1.0, 0.0), (0.5, 0.5), 10.0)),
            Err(WindTreeError::BadStart)
        );
        assert_eq!(
            simulate(&cfg((0.0, 0.0), (0.1, 0.1), 10.0)),
            Err(WindTreeError::BadDirection)
        );
        let short = simulate(&cfg((1.0, 0.0), (0.3, 0.1), 10.0)).unwrap();
        assert!(matches!(
            diffusion_exponent(&short, 1.0),
            Err(WindTreeError::InsufficientRange(_))
        ));
    }
}
