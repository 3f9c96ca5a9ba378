//! Second-order forward-mode differentiation with interval coefficients.
//!
//! A [`Jet<N>`] carries an enclosure of a function value together with
//! enclosures of its gradient and Hessian with respect to `N` seeded
//! variables. Evaluating a jet over a box gives derivative bounds valid
//! on the whole box, which feed the mean-value and second-order Taylor
//! forms in [`TaylorForm`].

use crate::interval::{Interval, Result};

#[derive(Debug, Clone, Copy)]
pub struct Jet<const N: usize> {
    pub value: Interval,
    pub grad: [Interval; N],
    pub hess: [[Interval; N]; N],
}

impl<const N: usize> Jet<N> {
    pub fn constant(value: Interval) -> Self {
        Jet { value, grad: [Interval::ZERO; N], hess: [[Interval::ZERO; N]; N] }
    }

    /// The `i`-th independent variable ranging over `value`.
    pub fn var(value: Interval, i: usize) -> Self {
        let mut j = Self::constant(value);
        j.grad[i] = Interval::ONE;
        j
    }

    pub fn neg(&self) -> Self {
        let mut out = *self;
        out.value = self.value.neg();
        for i in 0..N {
            out.grad[i] = self.grad[i].neg();
            for k in 0..N {
                out.hess[i][k] = self.hess[i][k].neg();
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = Self::constant(self.value.add(&other.value)?);
        for i in 0..N {
            out.grad[i] = self.grad[i].add(&other.grad[i])?;
            for k in i..N {
                out.hess[i][k] = self.hess[i][k].add(&other.hess[i][k])?;
                out.hess[k][i] = out.hess[i][k];
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn add_scalar(&self, c: f64) -> Result<Self> {
        let mut out = *self;
        out.value = self.value.add_f64(c)?;
        Ok(out)
    }

    pub fn scale(&self, c: &Interval) -> Result<Self> {
        let mut out = Self::constant(self.value.mul(c)?);
        for i in 0..N {
            out.grad[i] = self.grad[i].mul(c)?;
            for k in i..N {
                out.hess[i][k] = self.hess[i][k].mul(c)?;
                out.hess[k][i] = out.hess[i][k];
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = (self, other);
        let mut out = Self::constant(a.value.mul(&b.value)?);
        for i in 0..N {
            out.grad[i] = a.grad[i].mul(&b.value)?.add(&a.value.mul(&b.grad[i])?)?;
        }
        for i in 0..N {
            for k in i..N {
                let h = a.hess[i][k]
                    .mul(&b.value)?
                    .add(&a.grad[i].mul(&b.grad[k])?)?
                    .add(&a.grad[k].mul(&b.grad[i])?)?
                    .add(&a.value.mul(&b.hess[i][k])?)?;
                out.hess[i][k] = h;
                out.hess[k][i] = h;
            }
        }
        Ok(out)
    }

    /// Applies a scalar function given enclosures of `f`, `f'` and `f''`
    /// over the value range.
    pub fn chain(&self, f0: Interval, f1: Interval, f2: Interval) -> Result<Self> {
        let mut out = Self::constant(f0);
        for i in 0..N {
            out.grad[i] = f1.mul(&self.grad[i])?;
        }
        for i in 0..N {
            for k in i..N {
                let h = f1
                    .mul(&self.hess[i][k])?
                    .add(&f2.mul(&self.grad[i].mul(&self.grad[k])?)?)?;
                out.hess[i][k] = h;
                out.hess[k][i] = h;
            }
        }
        Ok(out)
    }

    pub fn recip(&self) -> Result<Self> {
        let r = self.value.recip()?;
        let r2 = r.sqr()?;
        let f1 = r2.neg();
        let f2 = r2.mul(&r)?.mul_f64(2.0)?;
        self.chain(r, f1, f2)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.recip()?)
    }

    pub fn exp(&self) -> Result<Self> {
        let e = self.value.exp()?;
        self.chain(e, e, e)
    }

    pub fn ln(&self) -> Result<Self> {
        let l = self.value.ln()?;
        let r = self.value.recip()?;
        let f2 = r.sqr()?.neg();
        self.chain(l, r, f2)
    }

    /// Componentwise hull, enclosing both jets.
    pub fn hull(&self, other: &Self) -> Self {
        let mut out = Self::constant(self.value.hull(&other.value));
        for i in 0..N {
            out.grad[i] = self.grad[i].hull(&other.grad[i]);
            for k in 0..N {
                out.hess[i][k] = self.hess[i][k].hull(&other.hess[i][k]);
            }
        }
        out
    }

    /// `self^q` for a strictly positive base.
    pub fn pow(&self, q: &Self) -> Result<Self> {
        q.mul(&self.ln()?)?.exp()
    }
}

/// Enclosures of a scalar function over a box built from jets.
#[derive(Debug, Clone, Copy)]
pub struct TaylorForm<const N: usize> {
    /// Offsets `x - c` ranging over the box, one per variable.
    pub offsets: [Interval; N],
}

impl<const N: usize> TaylorForm<N> {
    /// Offsets of `box_` around `center`; `center[i]` must lie in `box_[i]`.
    pub fn new(box_: &[Interval; N], center: &[f64; N]) -> Result<Self> {
        let mut offsets = [Interval::ZERO; N];
        for i in 0..N {
            offsets[i] = box_[i].sub(&Interval::point(center[i]))?;
        }
        Ok(TaylorForm { offsets })
    }

    /// First-order mean-value form `f(c) + ∇f(X)·(x - c)`.
    pub fn mean_value(&self, at_center: &Jet<N>, over_box: &Jet<N>) -> Result<Interval> {
        let mut acc = at_center.value;
        for i in 0..N {
            acc = acc.add(&over_box.grad[i].mul(&self.offsets[i])?)?;
        }
        Ok(acc)
    }

    /// Second-order form `f(c) + ∇f(c)·h + ½ hᵀ H(X) h`.
    pub fn second_order(&self, at_center: &Jet<N>, over_box: &Jet<N>) -> Result<Interval> {
        let h = &self.offsets;
        let mut acc = at_center.value;
        for i in 0..N {
            acc = acc.add(&at_center.grad[i].mul(&h[i])?)?;
        }
        let mut quad = Interval::ZERO;
        for i in 0..N {
            quad = quad.add(&over_box.hess[i][i].mul(&h[i].sqr()?)?.mul_f64(0.5)?)?;
            for k in (i + 1)..N {
                quad = quad.add(&over_box.hess[i][k].mul(&h[i].mul(&h[k])?)?)?;
            }
        }
        acc.add(&quad)
    }
}
