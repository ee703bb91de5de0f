//! Lipschitz constants of the network and of its JSD head.

use serde::{Deserialize, Serialize};

use super::network::SmallNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeadConstants {
    /// Lipschitz constant of `z -> JSD(softmax(z), y)` for two classes.
    pub l0: f64,
    /// Lipschitz constant of its gradient.
    pub l1: f64,
    /// Probability of the true class at which `l0` is attained.
    pub argmax: f64,
}

fn head_gradient_norm(p: f64) -> f64 {
    std::f64::consts::FRAC_1_SQRT_2 * ((1.0 + p) / p).log2() * p * (1.0 - p)
}

/// `l0 = max_p (1/sqrt 2) log2((1 + p)/p) p (1 - p)` by golden-section search;
/// `l1 = 1/2`.
pub fn jsd_head_constants() -> HeadConstants {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (head_gradient_norm(c), head_gradient_norm(d));
    while b - a > 1e-8 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = head_gradient_norm(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = head_gradient_norm(d);
        }
    }
    let argmax = 0.5 * (a + b);
    HeadConstants { l0: head_gradient_norm(argmax), l1: 0.5, argmax }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzProfile {
    pub operator_norms: Vec<f64>,
    /// `alpha[l]` bounds the Lipschitz constant of the first `l` layers.
    pub alpha: Vec<f64>,
    /// `beta[l]` bounds the Lipschitz constant of their Jacobian.
    pub beta: Vec<f64>,
    pub head: HeadConstants,
    /// Curvature bound of the loss as a function of the input.
    pub l_star: f64,
}

impl LipschitzProfile {
    /// Recursion with unit ELU constants, starting from `alpha_0 = 1`,
    /// `beta_0 = 0`.
    pub fn from_norms(norms: &[f64], head: HeadConstants) -> Self {
        let mut alpha = vec![1.0];
        let mut beta = vec![0.0];
        for &s in norms {
            let (a, b) = (*alpha.last().unwrap(), *beta.last().unwrap());
            alpha.push(s * a);
            beta.push(s * b + s * s * a * a);
        }
        let (a, b) = (*alpha.last().unwrap(), *beta.last().unwrap());
        LipschitzProfile {
            operator_norms: norms.to_vec(),
            l_star: head.l0 * b + head.l1 * a * a,
            alpha,
            beta,
            head,
        }
    }

    pub fn alpha_out(&self) -> f64 {
        *self.alpha.last().unwrap()
    }

    /// Lipschitz constant of the loss in the input, `l0 alpha_L`.
    pub fn loss_lipschitz(&self) -> f64 {
        self.head.l0 * self.alpha_out()
    }
}

pub fn lipschitz_profile(net: &SmallNetwork) -> LipschitzProfile {
    LipschitzProfile::from_norms(&net.operator_norms(), jsd_head_constants())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::losses::jsd_gradient;

    #[test]
    fn head_constant() {
        let h = jsd_head_constants();
        assert!((h.l0 - 0.314568).abs() < 1e-4, "{}", h.l0);
        assert_eq!(h.l1, 0.5);
        assert!(h.argmax > 0.01 && h.argmax < 0.99);
        // the closed form is the norm of the two-class logit gradient
        let p = h.argmax;
        let z = [0.0, (p / (1.0 - p)).ln()];
        let g = jsd_gradient(&z, 1);
        assert!(((g[0] * g[0] + g[1] * g[1]).sqrt() - h.l0).abs() < 1e-12);
    }

    #[test]
    fn recursion_examples() {
        let head = jsd_head_constants();
        let one = LipschitzProfile::from_norms(&[1.0], head);
        assert_eq!(one.alpha, vec![1.0, 1.0]);
        assert_eq!(one.beta, vec![0.0, 1.0]);
        let p = LipschitzProfile::from_norms(&[0.9, 0.5, 0.7], head);
        assert!((p.alpha_out() - 0.315).abs() < 1e-15);
        let b2 = 0.5 * 0.81 + 0.25 * 0.81;
        let b3 = 0.7 * b2 + 0.49 * 0.45 * 0.45;
        assert!((p.beta[3] - b3).abs() < 1e-15);
        assert!((p.l_star - (head.l0 * b3 + 0.5 * 0.315 * 0.315)).abs() < 1e-15);
    }

    #[test]
    fn normalized_net_has_alpha_at_most_one() {
        let net = SmallNetwork::new(&[16, 16], 4).unwrap();
        let p = lipschitz_profile(&net);
        assert!(p.alpha.iter().all(|&a| a <= 1.0 + 1e-6));
        assert!(p.beta.windows(2).all(|w| w[1] >= 0.0 && w[0] >= 0.0));
    }
}
