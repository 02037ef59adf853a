//! Dense dual active-set QP (Goldfarb–Idnani) for
//! `min 1/2 x'Gx + a'x  s.t.  c_j'x = b_j (j < meq),  c_j'x >= b_j`.
//!
//! Needs no feasible start, which is what the projection step relies on.
//! Problem sizes here are tiny, so the active-set factorizations are
//! rebuilt from scratch each iteration.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug, PartialEq)]
pub enum QpOutcome {
    Solved { x: DVector<f64>, active: Vec<usize> },
    Infeasible,
}

pub struct Qp {
    pub g: DMatrix<f64>,
    pub a: DVector<f64>,
    /// One constraint per row.
    pub c: DMatrix<f64>,
    pub b: DVector<f64>,
    pub meq: usize,
}

const MAX_ITERS: usize = 500;

impl Qp {
    pub fn solve(&self, tol: f64) -> QpOutcome {
        let n = self.g.nrows();
        let Some(chol) = self.g.clone().cholesky() else {
            return QpOutcome::Infeasible;
        };
        let ginv = chol.inverse();
        let mut x = -(&ginv * &self.a);
        let mut active: Vec<usize> = Vec::new();
        let mut sign: Vec<f64> = Vec::new();
        let mut u: Vec<f64> = Vec::new();
        let row = |j: usize| -> DVector<f64> { self.c.row(j).transpose() };

        for _ in 0..MAX_ITERS {
            // Pick the most violated constraint; equalities first.
            let mut pick: Option<(usize, f64, f64)> = None;
            for j in 0..self.c.nrows() {
                if active.contains(&j) {
                    continue;
                }
                let s = row(j).dot(&x) - self.b[j];
                let scale = 1.0 + self.b[j].abs();
                if j < self.meq {
                    if s.abs() > tol * scale {
                        pick = Some((j, if s > 0.0 { -1.0 } else { 1.0 }, -s.abs()));
                        break;
                    }
                } else if s < -tol * scale && pick.is_none_or(|(_, _, w)| s < w) {
                    pick = Some((j, 1.0, s));
                }
            }
            let Some((p, sg, _)) = pick else {
                return QpOutcome::Solved { x, active };
            };
            let np = row(p) * sg;
            let bp = self.b[p] * sg;
            let mut up = 0.0;

            loop {
                let q = active.len();
                let nmat = DMatrix::from_fn(n, q, |r, c| self.c[(active[c], r)] * sign[c]);
                let gn = &ginv * &nmat;
                let (z, r) = if q == 0 {
                    (&ginv * &np, DVector::zeros(0))
                } else {
                    let m = nmat.transpose() * &gn;
                    let minv = match m.clone().cholesky() {
                        Some(ch) => ch.inverse(),
                        None => m.pseudo_inverse(1e-14).unwrap_or_else(|_| DMatrix::zeros(q, q)),
                    };
                    let nstar = &minv * gn.transpose();
                    let h = &ginv - &gn * &nstar;
                    (&h * &np, &nstar * &np)
                };
                // Partial step limited by dropping an inequality.
                let mut t1 = f64::INFINITY;
                let mut drop = None;
                for k in 0..q {
                    if active[k] >= self.meq && r[k] > 0.0 {
                        let ratio = u[k] / r[k];
                        if ratio < t1 {
                            t1 = ratio;
                            drop = Some(k);
                        }
                    }
                }
                let zn = z.dot(&np);
                let s = np.dot(&x) - bp;
                let t2 = if z.amax() > 1e-14 && zn > 0.0 { -s / zn } else { f64::INFINITY };
                let t = t1.min(t2);
                if !t.is_finite() {
                    return QpOutcome::Infeasible;
                }
                if t2.is_finite() {
                    x += &z * t;
                }
                for k in 0..q {
                    u[k] -= t * r[k];
                }
                up += t;
                if t == t2 {
                    active.push(p);
                    sign.push(sg);
                    u.push(up);
                    break;
                }
                let k = drop.expect("finite partial step has a blocking index");
                active.remove(k);
                sign.remove(k);
                u.remove(k);
            }
        }
        QpOutcome::Infeasible
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solved(o: QpOutcome) -> DVector<f64> {
        match o {
            QpOutcome::Solved { x, .. } => x,
            QpOutcome::Infeasible => panic!("expected a solution"),
        }
    }

    #[test]
    fn projection_onto_halfplane() {
        // project (0, 0) onto x + y >= 2
        let qp = Qp {
            g: DMatrix::identity(2, 2),
            a: DVector::zeros(2),
            c: DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
            b: DVector::from_vec(vec![2.0]),
            meq: 0,
        };
        let x = solved(qp.solve(1e-12));
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equality_and_inactive_bound() {
        // min x^2 + y^2 - 4x  s.t. y = 1, x <= 5
        let qp = Qp {
            g: DMatrix::identity(2, 2) * 2.0,
            a: DVector::from_vec(vec![-4.0, 0.0]),
            c: DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]),
            b: DVector::from_vec(vec![1.0, -5.0]),
            meq: 1,
        };
        let x = solved(qp.solve(1e-12));
        assert!((x[0] - 2.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn active_set_drops_a_constraint() {
        // min |x - (3, 3)|^2  s.t. x <= 1, y <= 1, x + y >= 0
        let qp = Qp {
            g: DMatrix::identity(2, 2),
            a: DVector::from_vec(vec![-3.0, -3.0]),
            c: DMatrix::from_row_slice(3, 2, &[-1.0, 0.0, 0.0, -1.0, 1.0, 1.0]),
            b: DVector::from_vec(vec![-1.0, -1.0, 0.0]),
            meq: 0,
        };
        let x = solved(qp.solve(1e-12));
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contradictory_bounds() {
        let qp = Qp {
            g: DMatrix::identity(1, 1),
            a: DVector::zeros(1),
            c: DMatrix::from_row_slice(2, 1, &[1.0, -1.0]),
            b: DVector::from_vec(vec![1.0, 0.0]),
            meq: 0,
        };
        assert_eq!(qp.solve(1e-12), QpOutcome::Infeasible);
    }
}
