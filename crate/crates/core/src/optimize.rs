//! Box-constrained Nelder–Mead minimizer.
//!
//! Trial points are projected onto the box, so the simplex may flatten onto
//! a face when the optimum sits on a bound. Non-finite objective values are
//! treated as +inf.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iter: usize,
    /// Stop once every vertex is within this distance (max-norm) of the best.
    pub x_tol: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iter: 500,
            x_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub struct Bounds<'a> {
    pub lower: &'a [f64],
    pub upper: &'a [f64],
}

impl Bounds<'_> {
    fn project(&self, x: &mut [f64]) {
        for ((v, &lo), &hi) in x.iter_mut().zip(self.lower).zip(self.upper) {
            *v = v.clamp(lo, hi);
        }
    }
}

pub fn minimize<F>(
    mut f: F,
    start: &[f64],
    step: &[f64],
    bounds: &Bounds<'_>,
    opts: SimplexOptions,
) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = start.len();
    let mut eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut x0 = start.to_vec();
    bounds.project(&mut x0);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.clone(), eval(&x0)));
    for i in 0..dim {
        let mut v = x0.clone();
        v[i] += step[i];
        if v[i] > bounds.upper[i] {
            v[i] = x0[i] - step[i];
        }
        bounds.project(&mut v);
        let fv = eval(&v);
        simplex.push((v, fv));
    }

    let mut iterations = 0;
    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0].0;
        let spread = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(best).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread < opts.x_tol {
            converged = true;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        let worst = dim;
        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..worst].iter().map(|(v, _)| v[j]).sum::<f64>() / dim as f64)
            .collect();
        let toward = |t: f64, from: &[f64]| {
            let mut p: Vec<f64> = centroid
                .iter()
                .zip(from)
                .map(|(c, w)| c + t * (w - c))
                .collect();
            bounds.project(&mut p);
            p
        };
        let f_best = simplex[0].1;
        let f_second = simplex[worst - 1].1;
        let f_worst = simplex[worst].1;
        let xw = simplex[worst].0.clone();

        let xr = toward(-1.0, &xw);
        let fr = eval(&xr);
        if fr < f_best {
            let xe = toward(-2.0, &xw);
            let fe = eval(&xe);
            simplex[worst] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            simplex[worst] = (xr, fr);
            continue;
        }
        // Outside contraction when the reflection helped at all, inside otherwise.
        let xc = if fr < f_worst {
            toward(0.5, &xr)
        } else {
            toward(0.5, &xw)
        };
        let fc = eval(&xc);
        if fc < fr.min(f_worst) {
            simplex[worst] = (xc, fc);
            continue;
        }
        // Shrink toward the best vertex.
        let best = simplex[0].0.clone();
        for (v, fv) in simplex.iter_mut().skip(1) {
            for (x, b) in v.iter_mut().zip(&best) {
                *x = b + 0.5 * (*x - b);
            }
            *fv = eval(v);
        }
    }

    let (x, value) = simplex.swap_remove(0);
    SimplexResult {
        x,
        value,
        iterations,
        converged,
    }
}
