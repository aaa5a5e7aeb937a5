use num_complex::Complex64;

/// Nelder–Mead minimization of a scalar function of one complex variable.
///
/// `f` returns `None` outside its domain, which the simplex treats as `+∞`.
/// Stops after `max_iter` iterations or once the simplex diameter falls
/// below `tol`. Returns the best vertex and its value.
pub fn minimize(
    f: impl Fn(Complex64) -> Option<f64>,
    start: Complex64,
    steps: (f64, f64),
    max_iter: usize,
    tol: f64,
) -> (Complex64, f64) {
    let g = |z: Complex64| f(z).filter(|v| v.is_finite()).unwrap_or(f64::INFINITY);
    let mut simplex = [
        (start, g(start)),
        (start + Complex64::new(steps.0, 0.0), 0.0),
        (start + Complex64::new(0.0, steps.1), 0.0),
    ];
    // Flip an initial step that leaves the domain.
    for (k, dir) in [(1, Complex64::new(steps.0, 0.0)), (2, Complex64::new(0.0, steps.1))] {
        let forward = g(start + dir);
        let backward = g(start - dir);
        simplex[k] = if forward.is_finite() || !backward.is_finite() {
            (start + dir, forward)
        } else {
            (start - dir, backward)
        };
    }

    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = (simplex[0].0 - simplex[1].0)
            .norm()
            .max((simplex[0].0 - simplex[2].0).norm())
            .max((simplex[1].0 - simplex[2].0).norm());
        if diameter < tol {
            break;
        }
        let (best, second, worst) = (simplex[0], simplex[1], simplex[2]);
        let centroid = (best.0 + second.0) * 0.5;
        let reflected = centroid + (centroid - worst.0);
        let fr = g(reflected);
        if fr < best.1 {
            let expanded = centroid + (centroid - worst.0) * 2.0;
            let fe = g(expanded);
            simplex[2] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < second.1 {
            simplex[2] = (reflected, fr);
            continue;
        }
        let (contracted, accept_at) = if fr < worst.1 {
            (centroid + (reflected - centroid) * 0.5, fr)
        } else {
            (centroid + (worst.0 - centroid) * 0.5, worst.1)
        };
        let fc = g(contracted);
        if fc < accept_at || (fc == accept_at && fr < worst.1) {
            simplex[2] = (contracted, fc);
            continue;
        }
        for v in simplex.iter_mut().skip(1) {
            let p = best.0 + (v.0 - best.0) * 0.5;
            *v = (p, g(p));
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex[0]
}
