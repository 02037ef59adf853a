use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::qp::{Qp, QpOutcome};
use crate::constraint::{ConstraintSystem, Relation, NVARS};
use crate::error::{Error, Result};
use crate::geometry::{rect_height, rect_width};
use crate::support::{chain_gradient, chain_length};

const QP_TOL: f64 = 1e-13;
const SUBGRADIENT_STEPS: usize = 300;
const POLISH_STEPS: usize = 300;
const PROX: f64 = 1e-3;
const SCHEDULE: [f64; 7] = [1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9];

/// Constraints as `c z >= b` rows, equalities first.
struct Rows {
    c: DMatrix<f64>,
    b: DVector<f64>,
    meq: usize,
}

fn rows(sys: &ConstraintSystem) -> Rows {
    let mut eq = Vec::new();
    let mut ge = Vec::new();
    for c in sys.iter() {
        match c.rel {
            Relation::Eq => eq.push((c.coeffs, c.rhs)),
            Relation::Ge => ge.push((c.coeffs, c.rhs)),
            Relation::Le => ge.push((c.coeffs.map(|a| -a), -c.rhs)),
        }
    }
    let meq = eq.len();
    let all: Vec<_> = eq.into_iter().chain(ge).collect();
    let c = DMatrix::from_fn(all.len(), NVARS, |r, k| all[r].0[k]);
    let b = DVector::from_iterator(all.len(), all.iter().map(|r| r.1));
    Rows { c, b, meq }
}

fn to_array(v: &DVector<f64>) -> [f64; NVARS] {
    std::array::from_fn(|i| v[i])
}

/// Euclidean projection of `z0` onto the feasible polyhedron of `sys`.
pub fn project_feasible(sys: &ConstraintSystem, z0: &[f64; NVARS]) -> Result<[f64; NVARS]> {
    project(&rows(sys), z0)
}

fn project(r: &Rows, z0: &[f64; NVARS]) -> Result<[f64; NVARS]> {
    let qp = Qp {
        g: DMatrix::identity(NVARS, NVARS),
        a: -DVector::from_column_slice(z0),
        c: r.c.clone(),
        b: r.b.clone(),
        meq: r.meq,
    };
    match qp.solve(QP_TOL) {
        QpOutcome::Solved { x, .. } => Ok(to_array(&x)),
        QpOutcome::Infeasible => Err(Error::Infeasible),
    }
}

fn smoothed(z: &[f64; NVARS], eps: f64) -> f64 {
    (0..8)
        .map(|i| {
            let j = (i + 1) % 8;
            let dx = z[2 * j] - z[2 * i];
            let dy = z[2 * j + 1] - z[2 * i + 1];
            (dx * dx + dy * dy + eps * eps).sqrt()
        })
        .sum()
}

fn smoothed_derivatives(z: &[f64; NVARS], eps: f64) -> (DVector<f64>, DMatrix<f64>) {
    let mut g = DVector::zeros(NVARS);
    let mut h = DMatrix::zeros(NVARS, NVARS);
    for i in 0..8 {
        let j = (i + 1) % 8;
        let e = [z[2 * j] - z[2 * i], z[2 * j + 1] - z[2 * i + 1]];
        let d = (e[0] * e[0] + e[1] * e[1] + eps * eps).sqrt();
        for a in 0..2 {
            g[2 * j + a] += e[a] / d;
            g[2 * i + a] -= e[a] / d;
            for b in 0..2 {
                let k = ((a == b) as u8 as f64 - e[a] * e[b] / (d * d)) / d;
                h[(2 * j + a, 2 * j + b)] += k;
                h[(2 * i + a, 2 * i + b)] += k;
                h[(2 * j + a, 2 * i + b)] -= k;
                h[(2 * i + a, 2 * j + b)] -= k;
            }
        }
    }
    (g, h)
}

/// Proximal SQP on the smoothed length, one pass per smoothing level.
fn polish(sys: &ConstraintSystem, r: &Rows, mut z: [f64; NVARS], schedule: &[f64]) -> [f64; NVARS] {
    for &eps in schedule {
        for _ in 0..POLISH_STEPS {
            let (g, mut h) = smoothed_derivatives(&z, eps);
            for i in 0..NVARS {
                h[(i, i)] += PROX;
            }
            let zv = DVector::from_column_slice(&z);
            let qp = Qp { g: h, a: g.clone(), c: r.c.clone(), b: &r.b - &r.c * &zv, meq: r.meq };
            let QpOutcome::Solved { x: d, .. } = qp.solve(QP_TOL) else { break };
            let slope = g.dot(&d);
            if d.amax() < 1e-14 || slope >= 0.0 {
                break;
            }
            let f0 = smoothed(&z, eps);
            let mut alpha = 1.0;
            let mut moved = false;
            while alpha > 1e-10 {
                let cand = to_array(&(&zv + &d * alpha));
                if sys.max_violation(&cand) <= 1e-12 && smoothed(&cand, eps) <= f0 + 1e-4 * alpha * slope {
                    z = cand;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !moved || f0 - smoothed(&z, eps) < 1e-16 {
                break;
            }
        }
    }
    z
}

/// Best feasible point found by projected subgradient descent from random
/// starts followed by a smoothed SQP polish, with its chain length.
pub fn subgradient_search(sys: &ConstraintSystem, restarts: usize, seed: u64) -> Result<([f64; NVARS], f64)> {
    if restarts == 0 {
        return Err(Error::InvalidOptions("restarts must be at least 1".into()));
    }
    let r = rows(sys);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (l, w) = (rect_width(), rect_height());
    let mut best: Option<([f64; NVARS], f64)> = None;
    for _ in 0..restarts {
        let start: [f64; NVARS] = std::array::from_fn(|i| {
            if i % 2 == 0 {
                rng.random_range(-l..2.0 * l)
            } else {
                rng.random_range(0.0..w)
            }
        });
        let mut z = project(&r, &start)?;
        let mut z_best = z;
        let mut f_best = chain_length(&z);
        for k in 0..SUBGRADIENT_STEPS {
            let g = chain_gradient(&z);
            let step = 0.05 / ((k + 1) as f64).sqrt();
            let trial: [f64; NVARS] = std::array::from_fn(|i| z[i] - step * g[i]);
            z = project(&r, &trial)?;
            let f = chain_length(&z);
            if f < f_best {
                f_best = f;
                z_best = z;
            }
        }
        let z = polish(sys, &r, z_best, &SCHEDULE);
        let f = chain_length(&z);
        let (z, f) = if f < f_best { (z, f) } else { (z_best, f_best) };
        if best.as_ref().is_none_or(|b| f < b.1) {
            best = Some((z, f));
        }
    }
    Ok(best.expect("restarts >= 1"))
}

/// Value of [`subgradient_search`].
pub fn subgradient_minimize(sys: &ConstraintSystem, restarts: usize, seed: u64) -> Result<f64> {
    subgradient_search(sys, restarts, seed).map(|(_, f)| f)
}

/// Equalities solved for pivot variables: `z[pivot] = rhs - sum coef * z[free]`.
struct Elimination {
    pivots: Vec<(usize, Vec<(usize, f64)>, f64)>,
    free: Vec<usize>,
}

fn eliminate(sys: &ConstraintSystem) -> Option<Elimination> {
    let eqs: Vec<_> = sys.iter().filter(|c| c.rel == Relation::Eq).collect();
    let mut a = DMatrix::from_fn(eqs.len(), NVARS, |r, k| eqs[r].coeffs[k]);
    let mut b: Vec<f64> = eqs.iter().map(|c| c.rhs).collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..NVARS {
        if row == a.nrows() {
            break;
        }
        let (best, val) = (row..a.nrows())
            .map(|r| (r, a[(r, col)].abs()))
            .fold((row, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val < 1e-12 {
            continue;
        }
        a.swap_rows(row, best);
        b.swap(row, best);
        let p = a[(row, col)];
        for k in 0..NVARS {
            a[(row, k)] /= p;
        }
        b[row] /= p;
        for r in 0..a.nrows() {
            if r != row && a[(r, col)] != 0.0 {
                let f = a[(r, col)];
                for k in 0..NVARS {
                    a[(r, k)] -= f * a[(row, k)];
                }
                b[r] -= f * b[row];
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    if b[row..].iter().any(|v| v.abs() > 1e-9) {
        return None;
    }
    let free: Vec<usize> = (0..NVARS).filter(|k| !pivot_cols.contains(k)).collect();
    let pivots = pivot_cols
        .iter()
        .enumerate()
        .map(|(r, &col)| {
            let deps = free.iter().filter(|&&k| a[(r, k)] != 0.0).map(|&k| (k, a[(r, k)])).collect();
            (col, deps, b[r])
        })
        .collect();
    Some(Elimination { pivots, free })
}

/// Chain length at the best feasible grid point, found by block-coordinate
/// sweeps over pairs of support points. Free coordinates range over
/// `resolution` values in `[-l, 2l]` (x) or `[0, w]` (y); equality-pinned
/// coordinates follow from them. `+inf` when no feasible grid point is
/// reached. Any finite value is an upper bound on the true minimum.
pub fn grid_lower_sanity(sys: &ConstraintSystem, resolution: usize) -> Result<f64> {
    if resolution > 12 {
        return Err(Error::Resolution(resolution));
    }
    if resolution < 2 {
        return Err(Error::InvalidOptions("grid resolution must be at least 2".into()));
    }
    let Some(elim) = eliminate(sys) else { return Ok(f64::INFINITY) };
    let (l, w) = (rect_width(), rect_height());
    let axis = |k: usize, i: usize| -> f64 {
        let f = i as f64 / (resolution - 1) as f64;
        if k.is_multiple_of(2) {
            -l + 3.0 * l * f
        } else {
            w * f
        }
    };
    let point = |idx: &[usize; NVARS]| -> [f64; NVARS] {
        let mut z = [0.0; NVARS];
        for &k in &elim.free {
            z[k] = axis(k, idx[k]);
        }
        for (col, deps, rhs) in &elim.pivots {
            z[*col] = rhs - deps.iter().map(|&(k, a)| a * z[k]).sum::<f64>();
        }
        z
    };
    // Lexicographic score: total violation, then length.
    let score = |idx: &[usize; NVARS]| -> (f64, f64) {
        let z = point(idx);
        let v: f64 = sys.iter().map(|c| c.violation(&z)).filter(|&v| v > 1e-9).sum();
        (v, chain_length(&z))
    };
    let better = |a: (f64, f64), b: (f64, f64)| a.0 < b.0 - 1e-15 || (a.0 <= b.0 + 1e-15 && a.1 < b.1 - 1e-15);

    let mut idx = [resolution / 2; NVARS];
    let mut cur = score(&idx);
    for _ in 0..50 {
        let mut improved = false;
        for a in 0..8 {
            for b in a..8 {
                let coords: Vec<usize> = [2 * a, 2 * a + 1, 2 * b, 2 * b + 1]
                    .into_iter()
                    .filter(|k| elim.free.contains(k))
                    .collect::<std::collections::BTreeSet<_>>()
                    .into_iter()
                    .collect();
                if coords.is_empty() {
                    continue;
                }
                let total = resolution.pow(coords.len() as u32);
                let mut trial = idx;
                for code in 0..total {
                    let mut c = code;
                    for &k in &coords {
                        trial[k] = c % resolution;
                        c /= resolution;
                    }
                    let s = score(&trial);
                    if better(s, cur) {
                        cur = s;
                        idx = trial;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(if cur.0 == 0.0 { cur.1 } else { f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::base_system;
    use crate::constraint::{Affine, Constraint, Tag};
    use crate::geometry::CoverParams;

    #[test]
    fn projection_is_feasible() {
        let p = CoverParams::canonical();
        let sys = base_system(&p);
        let r = rows(&sys);
        let z = project(&r, &[0.7; NVARS]).unwrap();
        assert!(sys.max_violation(&z) < 1e-10);
    }

    #[test]
    fn smoothed_gradient_matches_differences() {
        let z: [f64; NVARS] = std::array::from_fn(|i| ((i * 7 % 5) as f64) * 0.1 + 0.01 * i as f64);
        let (g, _) = smoothed_derivatives(&z, 1e-3);
        for k in 0..NVARS {
            let mut a = z;
            let mut b = z;
            a[k] += 1e-6;
            b[k] -= 1e-6;
            let fd = (smoothed(&a, 1e-3) - smoothed(&b, 1e-3)) / 2e-6;
            assert!((fd - g[k]).abs() < 1e-6);
        }
    }

    #[test]
    fn grid_resolution_limit() {
        let sys = base_system(&CoverParams::canonical());
        assert!(matches!(grid_lower_sanity(&sys, 13), Err(Error::Resolution(13))));
    }

    #[test]
    fn grid_inconsistent_equalities() {
        let sys: ConstraintSystem = [
            Constraint::eq(Affine::x(1), Affine::constant(0.0), Tag::Placement),
            Constraint::eq(Affine::x(1), Affine::constant(1.0), Tag::Placement),
        ]
        .into_iter()
        .collect();
        assert_eq!(grid_lower_sanity(&sys, 4).unwrap(), f64::INFINITY);
    }
}
