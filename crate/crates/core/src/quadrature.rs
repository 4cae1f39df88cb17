//! Gauss–Legendre rules on the unit interval.

use std::f64::consts::PI;

/// Nodes and weights of the `order`-point Gauss–Legendre rule mapped to
/// `[0, 1]`. Nodes are returned in increasing order and the weights sum to 1.
///
/// The rule integrates polynomials of degree `< 2 * order` exactly.
pub fn gauss_legendre_unit(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "quadrature order must be positive");
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th root of P_n on [-1, 1].
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // roots come out in decreasing order of x
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        nodes[i] = 0.5 * (1.0 - x);
        weights[n - 1 - i] = 0.5 * w;
        weights[i] = 0.5 * w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one_and_nodes_are_symmetric() {
        for order in [1, 2, 3, 7, 16, 31] {
            let (x, w) = gauss_legendre_unit(order);
            let s: f64 = w.iter().sum();
            assert!((s - 1.0).abs() < 1e-14, "order {order}: {s}");
            for i in 0..order {
                assert!((x[i] + x[order - 1 - i] - 1.0).abs() < 1e-15);
                if i > 0 {
                    assert!(x[i] > x[i - 1]);
                }
            }
        }
    }

    #[test]
    fn exact_for_polynomials_below_twice_the_order() {
        let (x, w) = gauss_legendre_unit(16);
        for deg in 0..32 {
            let q: f64 = x.iter().zip(&w).map(|(t, wt)| wt * t.powi(deg)).sum();
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((q - exact).abs() < 1e-14, "degree {deg}: {q} vs {exact}");
        }
    }
}
