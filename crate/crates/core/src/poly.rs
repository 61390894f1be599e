//! Sparse multivariate polynomials, just enough to factor the linear form
//! `x_1 + ... + x_n` out of a homogeneous form.

use std::collections::BTreeMap;

use crate::tensor::{index, DenseTensor, Tensor};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Poly {
    nvars: usize,
    /// Exponent vector -> coefficient. `BTreeMap` order on `Vec<u32>` is
    /// lexicographic with `x_1` most significant.
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Poly {
    pub(crate) fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    /// The homogeneous form `T x^d` collected by monomial.
    pub(crate) fn from_form<T: Tensor>(t: &T) -> Self {
        let n = t.dim();
        let mut p = Self::zero(n);
        let mut expo = vec![0u32; n];
        index::for_each_index(t.order(), n, |idx| {
            let v = t.at(idx);
            if v != 0.0 {
                expo.iter_mut().for_each(|e| *e = 0);
                for &j in idx {
                    expo[j] += 1;
                }
                p.add_term(expo.clone(), v);
            }
        });
        p
    }

    fn add_term(&mut self, expo: Vec<u32>, coeff: f64) {
        *self.terms.entry(expo).or_insert(0.0) += coeff;
    }

    pub(crate) fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub(crate) fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c * e
                    .iter()
                    .zip(x)
                    .map(|(&p, &v)| v.powi(p as i32))
                    .product::<f64>()
            })
            .sum()
    }

    /// Division by `x_1 + ... + x_n` in lex order. Returns `(quotient,
    /// remainder)`; the remainder is free of `x_1` and equals the
    /// polynomial restricted to the hyperplane `sum x = 0`.
    pub(crate) fn divide_by_sum(&self) -> (Poly, Poly) {
        let mut work = self.terms.clone();
        let mut quot = Poly::zero(self.nvars);
        let mut rem = Poly::zero(self.nvars);
        while let Some((mono, coeff)) = work.pop_last() {
            if coeff == 0.0 {
                continue;
            }
            if mono[0] == 0 {
                rem.add_term(mono, coeff);
                continue;
            }
            let mut q = mono;
            q[0] -= 1;
            // subtract coeff * q * (x_2 + ... + x_n); the x_1 part cancels
            // the term just popped
            for v in 1..self.nvars {
                let mut m2 = q.clone();
                m2[v] += 1;
                *work.entry(m2).or_insert(0.0) -= coeff;
            }
            quot.add_term(q, coeff);
        }
        (quot, rem)
    }

    /// Symmetric tensor of the given order whose form is this polynomial.
    /// Terms of other degrees are ignored.
    pub(crate) fn to_symmetric_tensor(&self, order: usize) -> DenseTensor {
        let mut fact = vec![1.0f64; order + 1];
        for i in 1..=order {
            fact[i] = fact[i - 1] * i as f64;
        }
        let mut expo = vec![0u32; self.nvars];
        DenseTensor::from_fn(order, self.nvars, |idx| {
            expo.iter_mut().for_each(|e| *e = 0);
            for &j in idx {
                expo[j] += 1;
            }
            match self.terms.get(&expo) {
                Some(&c) => {
                    let count =
                        fact[order] / expo.iter().map(|&e| fact[e as usize]).product::<f64>();
                    c / count
                }
                None => 0.0,
            }
        })
    }
}
