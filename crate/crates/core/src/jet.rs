//! Truncated Taylor-series scalars for exact higher-order derivatives.
//!
//! A [`Jet`] carries the first [`JET_LEN`] Taylor coefficients of a smooth
//! function of one variable. Arithmetic on jets propagates derivatives
//! exactly (to machine precision), which is what the curve evaluators use
//! instead of numerical differentiation wherever a closed form exists.
//!
//! Coefficients are stored in Taylor form, `c[k] = f^(k)(t0) / k!`.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Number of Taylor coefficients carried by a [`Jet`] (degree `JET_LEN - 1`).
pub const JET_LEN: usize = 8;

/// Truncated Taylor series of a real function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub c: [f64; JET_LEN],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = v;
        Jet { c }
    }

    /// The identity function `t` expanded at `t0`.
    pub fn variable(t0: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = t0;
        c[1] = 1.0;
        Jet { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// k-th derivative, recovered from the Taylor coefficient.
    pub fn derivative(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        self.c[k] * fact
    }

    /// Series of the derivative function f'.
    pub fn deriv_series(&self) -> Jet {
        let mut c = [0.0; JET_LEN];
        for k in 1..JET_LEN {
            c[k - 1] = self.c[k] * k as f64;
        }
        Jet { c }
    }

    /// Evaluate the truncated polynomial at offset `h` from the expansion point.
    pub fn eval_poly(&self, h: f64) -> f64 {
        let mut acc = 0.0;
        for k in (0..JET_LEN).rev() {
            acc = acc * h + self.c[k];
        }
        acc
    }

    pub fn recip(&self) -> Jet {
        let mut c = [0.0; JET_LEN];
        let b0 = self.c[0];
        c[0] = 1.0 / b0;
        for k in 1..JET_LEN {
            let mut s = 0.0;
            for j in 1..=k {
                s += self.c[j] * c[k - j];
            }
            c[k] = -s / b0;
        }
        Jet { c }
    }

    pub fn sqrt(&self) -> Jet {
        let mut c = [0.0; JET_LEN];
        let s0 = self.c[0].sqrt();
        c[0] = s0;
        for k in 1..JET_LEN {
            let mut s = 0.0;
            for j in 1..k {
                s += c[j] * c[k - j];
            }
            c[k] = (self.c[k] - s) / (2.0 * s0);
        }
        Jet { c }
    }

    pub fn sin_cos(&self) -> (Jet, Jet) {
        let mut s = [0.0; JET_LEN];
        let mut c = [0.0; JET_LEN];
        s[0] = self.c[0].sin();
        c[0] = self.c[0].cos();
        for k in 1..JET_LEN {
            let mut sa = 0.0;
            let mut ca = 0.0;
            for j in 1..=k {
                let w = j as f64 * self.c[j];
                sa += w * c[k - j];
                ca += w * s[k - j];
            }
            s[k] = sa / k as f64;
            c[k] = -ca / k as f64;
        }
        (Jet { c: s }, Jet { c })
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    pub fn sinh_cosh(&self) -> (Jet, Jet) {
        let mut s = [0.0; JET_LEN];
        let mut c = [0.0; JET_LEN];
        s[0] = self.c[0].sinh();
        c[0] = self.c[0].cosh();
        for k in 1..JET_LEN {
            let mut sa = 0.0;
            let mut ca = 0.0;
            for j in 1..=k {
                let w = j as f64 * self.c[j];
                sa += w * c[k - j];
                ca += w * s[k - j];
            }
            s[k] = sa / k as f64;
            c[k] = ca / k as f64;
        }
        (Jet { c: s }, Jet { c })
    }

    pub fn sinh(&self) -> Jet {
        self.sinh_cosh().0
    }

    pub fn cosh(&self) -> Jet {
        self.sinh_cosh().1
    }

    pub fn exp(&self) -> Jet {
        let mut c = [0.0; JET_LEN];
        c[0] = self.c[0].exp();
        for k in 1..JET_LEN {
            let mut s = 0.0;
            for j in 1..=k {
                s += j as f64 * self.c[j] * c[k - j];
            }
            c[k] = s / k as f64;
        }
        Jet { c }
    }

    /// tan via sin/cos; the caller keeps the argument away from poles.
    pub fn tan(&self) -> Jet {
        let (s, c) = self.sin_cos();
        s / c
    }

    pub fn tanh(&self) -> Jet {
        let (s, c) = self.sinh_cosh();
        s / c
    }

    /// coth = cosh/sinh; the caller keeps the argument away from zero.
    pub fn coth(&self) -> Jet {
        let (s, c) = self.sinh_cosh();
        c / s
    }

    pub fn powi(&self, n: i32) -> Jet {
        match n {
            0 => Jet::constant(1.0),
            n if n < 0 => self.recip().powi(-n),
            _ => {
                let mut acc = *self;
                for _ in 1..n {
                    acc = acc * *self;
                }
                acc
            }
        }
    }

    pub fn scale(&self, a: f64) -> Jet {
        let mut c = self.c;
        for x in &mut c {
            *x *= a;
        }
        Jet { c }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut c = self.c;
        for k in 0..JET_LEN {
            c[k] += rhs.c[k];
        }
        Jet { c }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let mut c = self.c;
        for k in 0..JET_LEN {
            c[k] -= rhs.c[k];
        }
        Jet { c }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut c = [0.0; JET_LEN];
        for k in 0..JET_LEN {
            let mut s = 0.0;
            for j in 0..=k {
                s += self.c[j] * rhs.c[k - j];
            }
            c[k] = s;
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let mut c = [0.0; JET_LEN];
        let b0 = rhs.c[0];
        for k in 0..JET_LEN {
            let mut s = self.c[k];
            for j in 1..=k {
                s -= rhs.c[j] * c[k - j];
            }
            c[k] = s / b0;
        }
        Jet { c }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        let mut c = self.c;
        c[0] += rhs;
        Jet { c }
    }
}
