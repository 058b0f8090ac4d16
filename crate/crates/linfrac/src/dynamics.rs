//! Orbits of the rational map in homogeneous coordinates.
//!
//! Iteration runs on the homogeneous trace `u_{k+1} = A u_k / ||A u_k||_inf`
//! rather than on repeated fraction evaluation: the renormalized product
//! cannot overflow, and the distance to the forbidden set stays readable as
//! the last component of a unit vector. Points are emitted wherever the
//! projection is defined; the orbit status records forbidden crossings,
//! detected periodicity and fixed points.

use nalgebra::DVector;

use crate::error::Result;
use crate::geometry::Quadric;
use crate::homogeneous::{lift, pr, project, SystemMatrix};

/// Terminal state of an orbit computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitStatus {
    /// All `K` iterates were defined; nothing else was detected.
    CompleteUpTo(usize),
    /// The homogeneous iterate at this step entered the `U_0` band, so the
    /// corresponding point is undefined and iteration stopped.
    Forbidden(usize),
    /// The trace became proportional to an earlier iterate with this period,
    /// detected at the recorded step.
    Periodic { period: usize, detected_at: usize },
    /// Period-one recurrence: the iterate at this step reproduces its
    /// predecessor.
    FixedPoint(usize),
}

/// An orbit trace: defined points, the unit homogeneous iterates behind
/// them, and the terminal status.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub x0: DVector<f64>,
    /// Defined iterates `F^k(x0)`, starting with `x0` itself.
    pub points: Vec<DVector<f64>>,
    /// Unit-infinity-norm homogeneous iterates `u_k ~ A^k l(x0)`.
    pub trace: Vec<DVector<f64>>,
    pub status: OrbitStatus,
}

fn proportional(u: &DVector<f64>, v: &DVector<f64>, tol_per: f64) -> bool {
    let denom = v.dot(v);
    if denom == 0.0 {
        return false;
    }
    let c = u.dot(v) / denom;
    (u - v * c).amax() <= tol_per
}

/// Iterates the rational map from `x0` for at most `k_max` steps.
///
/// Stops early at a forbidden crossing or when the homogeneous trace becomes
/// proportional to an earlier iterate (exact dynamics then repeats forever).
pub fn iterate(s: &SystemMatrix, x0: &DVector<f64>, k_max: usize) -> Orbit {
    let tol = s.tolerances();
    let a = s.matrix();
    let mut u = lift(x0);
    u /= u.amax();
    let mut trace = vec![u.clone()];
    let mut points = Vec::new();
    if pr(&u).abs() <= tol.pr {
        return Orbit {
            x0: x0.clone(),
            points,
            trace,
            status: OrbitStatus::Forbidden(0),
        };
    }
    points.push(x0.clone());
    let mut status = OrbitStatus::CompleteUpTo(k_max);
    for k in 1..=k_max {
        let mut next = a * &u;
        next /= next.amax();
        trace.push(next.clone());
        if pr(&next).abs() <= tol.pr {
            status = OrbitStatus::Forbidden(k);
            break;
        }
        points.push(project(&next, tol.pr).expect("pr checked above"));
        // Recurrence scan: proportional homogeneous iterates mean equal
        // projected points, and equality at one step repeats forever.
        let mut detected = None;
        for p in 1..=k {
            if proportional(&next, &trace[k - p], tol.per) {
                detected = Some(p);
                break;
            }
        }
        if let Some(p) = detected {
            status = if p == 1 {
                OrbitStatus::FixedPoint(k)
            } else {
                OrbitStatus::Periodic {
                    period: p,
                    detected_at: k,
                }
            };
            break;
        }
        u = next;
    }
    Orbit {
        x0: x0.clone(),
        points,
        trace,
        status,
    }
}

impl Orbit {
    /// Smallest period consistent with the whole trace, requiring at least
    /// `2p + 1` homogeneous iterates as evidence for a candidate `p`. Orbits
    /// that already stopped on a detected recurrence report it directly.
    pub fn detect_period(&self, tol_per: f64) -> Option<usize> {
        match self.status {
            OrbitStatus::FixedPoint(_) => return Some(1),
            OrbitStatus::Periodic { period, .. } => return Some(period),
            _ => {}
        }
        let len = self.trace.len();
        if len < 3 {
            return None;
        }
        'candidate: for p in 1..=(len - 1) / 2 {
            for k in 0..len - p {
                if !proportional(&self.trace[k + p], &self.trace[k], tol_per) {
                    continue 'candidate;
                }
            }
            return Some(p);
        }
        None
    }

    /// Whether every iterate in the requested range was defined.
    pub fn is_complete(&self) -> bool {
        !matches!(self.status, OrbitStatus::Forbidden(_))
    }
}

/// Quadratic-form residuals of a quadric along the homogeneous trace.
#[derive(Debug, Clone)]
pub struct OrbitResiduals {
    pub max: f64,
    pub per_step: Vec<f64>,
}

/// Evaluates `|u_k^T M u_k| / (||M||_2 ||u_k||^2)` on every trace entry.
pub fn residuals_along_orbit(orbit: &Orbit, q: &Quadric) -> OrbitResiduals {
    let per_step: Vec<f64> = orbit
        .trace
        .iter()
        .map(|u| q.homogeneous_residual(u))
        .collect();
    let max = per_step.iter().copied().fold(0.0, f64::max);
    OrbitResiduals { max, per_step }
}

impl Orbit {
    /// Writes the trace as CSV: `step, x_1..x_n, pr_scaled` plus an optional
    /// residual column for an attached quadric; the status goes into a
    /// trailing comment record. Floats carry 17 significant digits.
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W, quadric: Option<&Quadric>) -> Result<()> {
        let n = self.x0.len();
        write!(w, "step")?;
        for i in 1..=n {
            write!(w, ",x_{i}")?;
        }
        write!(w, ",pr_scaled")?;
        if quadric.is_some() {
            write!(w, ",residual")?;
        }
        writeln!(w)?;
        for (k, x) in self.points.iter().enumerate() {
            write!(w, "{k}")?;
            for v in x.iter() {
                write!(w, ",{v:.16e}")?;
            }
            write!(w, ",{:.16e}", pr(&self.trace[k]))?;
            if let Some(q) = quadric {
                write!(w, ",{:.16e}", q.homogeneous_residual(&self.trace[k]))?;
            }
            writeln!(w)?;
        }
        let status = match self.status {
            OrbitStatus::CompleteUpTo(k) => format!("complete_up_to={k}"),
            OrbitStatus::Forbidden(k) => format!("forbidden_at={k}"),
            OrbitStatus::Periodic {
                period,
                detected_at,
            } => {
                format!("periodic period={period} detected_at={detected_at}")
            }
            OrbitStatus::FixedPoint(k) => format!("fixed_point detected_at={k}"),
        };
        writeln!(w, "# status: {status}")?;
        Ok(())
    }
}
