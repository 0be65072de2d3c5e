//! Damped Riemannian Newton iteration for sums of distances in the hyperboloid.

use nalgebra::{Matrix3, Vector3};

use crate::lorentz::{self, Line, Lv};

/// A term of the objective: distance to a point or to a line.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Target {
    Point(Lv),
    Line(Line),
}

impl Target {
    pub(crate) fn distance(&self, p: &Lv) -> f64 {
        match self {
            Target::Point(q) => lorentz::dist(p, q),
            Target::Line(l) => l.project(p).dist,
        }
    }

    /// Distance, the unit tangent at `p` toward the nearest point, and the
    /// Hessian of the distance in the given tangent basis.
    fn local_model(&self, p: &Lv, basis: &[Lv; 3]) -> (f64, Lv, Matrix3<f64>) {
        let coords = |v: &Lv| Vector3::new(v.dot(&basis[0]), v.dot(&basis[1]), v.dot(&basis[2]));
        match self {
            Target::Point(q) => {
                let d = lorentz::dist(p, q);
                let w = lorentz::toward(p, q);
                let wc = coords(&w);
                let h = (Matrix3::identity() - wc * wc.transpose()) / d.tanh();
                (d, w, h)
            }
            Target::Line(l) => {
                let pr = l.project(p);
                let wc = coords(&pr.toward);
                let e = coords(&l.parallel_direction(p, &pr.toward));
                let par = e * e.transpose();
                let h = par * pr.dist.tanh()
                    + (Matrix3::identity() - wc * wc.transpose() - par) / pr.dist.tanh();
                (pr.dist, pr.toward, h)
            }
        }
    }
}

/// Result of a minimization run.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Minimum {
    pub point: Lv,
    pub value: f64,
    pub iterations: usize,
    /// Norm of the sum of the unit tangents toward the targets.
    pub residual: f64,
}

pub(crate) fn objective(targets: &[Target], p: &Lv) -> f64 {
    targets.iter().map(|t| t.distance(p)).sum()
}

/// Minimizes the sum of distances to `targets`, starting from `start`.
pub(crate) fn minimize_sum(targets: &[Target], start: Lv) -> Minimum {
    let mut p = start.to_hyperboloid();
    let mut value = objective(targets, &p);
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    for it in 0..200 {
        iterations = it + 1;
        let basis = lorentz::tangent_basis(&p);
        let (grad, hess, kinked) = gradient_and_hessian(targets, &p, &basis);
        residual = grad.norm();
        if residual < 1e-13 {
            break;
        }
        let mut dir = if kinked {
            -grad
        } else {
            newton_direction(&hess, &grad).unwrap_or(-grad)
        };
        if dir.dot(&grad) >= 0.0 {
            dir = -grad;
        }
        if dir.norm() > MAX_STEP {
            dir *= MAX_STEP / dir.norm();
        }
        let slope = dir.dot(&grad);
        let tangent = |s: f64| {
            let v = basis[0]
                .scale(dir[0])
                .axpy(dir[1], &basis[1])
                .axpy(dir[2], &basis[2]);
            v.scale(s)
        };
        // Near the minimum the decrease drops below the rounding of the value;
        // there a full step is judged by whether it shrinks the gradient.
        let q = lorentz::exp(&p, &tangent(1.0));
        let fq = objective(targets, &q);
        if residual < 1e-6 && (fq - value).abs() <= 16.0 * f64::EPSILON * value.abs().max(1.0) {
            let (gq, _, _) = gradient_and_hessian(targets, &q, &lorentz::tangent_basis(&q));
            if gq.norm() < residual {
                p = q;
                value = fq.min(value);
                residual = gq.norm();
                continue;
            }
            break;
        }
        let mut step = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let q = lorentz::exp(&p, &tangent(step));
            let fq = objective(targets, &q);
            if fq <= value + 1e-4 * step * slope {
                p = q;
                value = fq;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
        if step * dir.norm() < 1e-15 {
            break;
        }
    }
    Minimum {
        point: p,
        value,
        iterations,
        residual,
    }
}

const KINK: f64 = 1e-10;
const MAX_STEP: f64 = 2.0;

/// Gradient and Hessian of the objective. At a point lying on a target the
/// objective is not differentiable; the gradient is then replaced by the
/// minimal-norm subgradient and the flag is set.
fn gradient_and_hessian(
    targets: &[Target],
    p: &Lv,
    basis: &[Lv; 3],
) -> (Vector3<f64>, Matrix3<f64>, bool) {
    let coords = |v: &Lv| Vector3::new(v.dot(&basis[0]), v.dot(&basis[1]), v.dot(&basis[2]));
    let mut grad = Vector3::zeros();
    let mut hess = Matrix3::zeros();
    let mut kinks = Vec::new();
    for t in targets {
        if t.distance(p) < KINK {
            kinks.push(t);
            continue;
        }
        let (_, w, h) = t.local_model(p, basis);
        grad -= coords(&w);
        hess += h;
    }
    for t in &kinks {
        grad = match t {
            Target::Point(_) => shrink(grad, grad),
            Target::Line(l) => {
                let tc = coords(&lorentz::to_tangent(p, &l.tangent_at(l.param_of(p))));
                let tc = tc / tc.norm();
                let normal = grad - tc * grad.dot(&tc);
                shrink(grad, normal)
            }
        };
    }
    (grad, hess, !kinks.is_empty())
}

/// Removes up to a unit length of the `part` component from `g`.
fn shrink(g: Vector3<f64>, part: Vector3<f64>) -> Vector3<f64> {
    let n = part.norm();
    if n <= 1.0 {
        g - part
    } else {
        g - part / n
    }
}

fn newton_direction(hess: &Matrix3<f64>, grad: &Vector3<f64>) -> Option<Vector3<f64>> {
    let scale = hess.norm().max(1.0);
    let mut shift = 0.0;
    for _ in 0..8 {
        let shifted = hess + Matrix3::identity() * shift;
        if let Some(ch) = shifted.cholesky() {
            return Some(-ch.solve(grad));
        }
        shift = if shift == 0.0 {
            1e-10 * scale
        } else {
            shift * 100.0
        };
    }
    None
}
