use nalgebra::DMatrix;

use super::poly;
use super::TransferFunction;
use crate::error::{Error, Result};

/// Single-input single-output realization `dx/dt = a x + b u`, `z = c x + d u`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: f64,
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: f64) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Dimension(format!("a is {}x{}", n, a.ncols())));
        }
        if b.shape() != (n, 1) {
            return Err(Error::Dimension(format!("b is {:?}, expected ({n}, 1)", b.shape())));
        }
        if c.shape() != (1, n) {
            return Err(Error::Dimension(format!("c is {:?}, expected (1, {n})", c.shape())));
        }
        let finite = a.iter().chain(b.iter()).chain(c.iter()).all(|x| x.is_finite());
        if !finite || !d.is_finite() {
            return Err(Error::Dimension("entries must be finite".into()));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// Recovers `c (sI - a)^-1 b + d` with the Faddeev-LeVerrier recursion.
    ///
    /// The denominator is the monic characteristic polynomial of `a`, the
    /// numerator is padded to the same length.
    pub fn to_transfer_function(&self) -> Result<TransferFunction> {
        let n = self.order();
        let mut den = vec![1.0];
        // adj(sI - a) = sum_k m_k s^(n-1-k), m_0 = I, m_k = a m_{k-1} + c_{k} I
        let mut adj_terms = Vec::with_capacity(n);
        let mut m = DMatrix::<f64>::identity(n, n);
        for k in 1..=n {
            adj_terms.push(m.clone());
            let am = &self.a * &m;
            let ck = -am.trace() / k as f64;
            den.push(ck);
            m = am + DMatrix::identity(n, n) * ck;
        }
        let mut num = vec![0.0; n + 1];
        for (k, mk) in adj_terms.iter().enumerate() {
            num[k + 1] = (&self.c * mk * &self.b)[(0, 0)];
        }
        let num = poly::add(&num, &poly::scale(&den, self.d));
        TransferFunction::new(num, den)
    }
}

/// Controllable canonical realization of a proper transfer function.
///
/// The denominator is normalized to be monic. With `den = s^n + a_1 s^(n-1) + .. + a_n`
/// the last row of `a` is `[-a_n .. -a_1]`, `b = e_n`, and `c` holds the
/// strictly proper numerator remainder lowest power first.
pub fn tf_to_state_space(tf: &TransferFunction) -> Result<StateSpace> {
    if !tf.is_proper() {
        return Err(Error::ImproperSystem {
            num_degree: tf.num_degree(),
            den_degree: tf.den_degree(),
        });
    }
    let den = poly::trim(tf.den());
    let lead = den[0];
    let den: Vec<f64> = den.iter().map(|x| x / lead).collect();
    let n = den.len() - 1;
    let num: Vec<f64> = poly::pad_to(&poly::trim(tf.num()), n + 1)
        .iter()
        .map(|x| x / lead)
        .collect();

    let d = num[0];
    // remainder after removing d * den, coefficients of s^(n-1) .. s^0
    let rem: Vec<f64> = (1..=n).map(|i| num[i] - d * den[i]).collect();

    let a = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 < n {
            if j == i + 1 {
                1.0
            } else {
                0.0
            }
        } else {
            -den[n - j]
        }
    });
    let b = DMatrix::from_fn(n, 1, |i, _| if i + 1 == n { 1.0 } else { 0.0 });
    let c = DMatrix::from_fn(1, n, |_, j| rem[n - 1 - j]);
    StateSpace::new(a, b, c, d)
}
