//! Entire scalar expressions in one complex variable.

use std::fmt;

use num_complex::Complex64;

/// Expression tree over literals, `z`, `+ − ·`, negation and `exp`.
///
/// There is no division, so every expression is an entire function of `z`.
/// Trees built through the smart constructors are kept in a small normal
/// form: constant subtrees are folded and additive/multiplicative identities
/// are dropped.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarExpr {
    Const(Complex64),
    Z,
    Neg(Box<ScalarExpr>),
    Add(Box<ScalarExpr>, Box<ScalarExpr>),
    Sub(Box<ScalarExpr>, Box<ScalarExpr>),
    Mul(Box<ScalarExpr>, Box<ScalarExpr>),
    Exp(Box<ScalarExpr>),
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

// Folding constructors named after the operations they build.
#[allow(clippy::should_implement_trait)]
impl ScalarExpr {
    pub fn constant(c: Complex64) -> Self {
        ScalarExpr::Const(c)
    }

    pub fn real(x: f64) -> Self {
        ScalarExpr::Const(Complex64::new(x, 0.0))
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self {
            ScalarExpr::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn is_value(&self, v: Complex64) -> bool {
        self.as_const() == Some(v)
    }

    pub fn neg(a: ScalarExpr) -> Self {
        match a {
            ScalarExpr::Const(c) => ScalarExpr::Const(-c),
            ScalarExpr::Neg(inner) => *inner,
            a => ScalarExpr::Neg(Box::new(a)),
        }
    }

    pub fn add(a: ScalarExpr, b: ScalarExpr) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => ScalarExpr::Const(x + y),
            _ if a.is_value(ZERO) => b,
            _ if b.is_value(ZERO) => a,
            _ => ScalarExpr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: ScalarExpr, b: ScalarExpr) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => ScalarExpr::Const(x - y),
            _ if b.is_value(ZERO) => a,
            _ if a.is_value(ZERO) => ScalarExpr::neg(b),
            _ => ScalarExpr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: ScalarExpr, b: ScalarExpr) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => ScalarExpr::Const(x * y),
            _ if a.is_value(ZERO) || b.is_value(ZERO) => ScalarExpr::Const(ZERO),
            _ if a.is_value(ONE) => b,
            _ if b.is_value(ONE) => a,
            _ => ScalarExpr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn exp(a: ScalarExpr) -> Self {
        match a {
            ScalarExpr::Const(c) => ScalarExpr::Const(c.exp()),
            a => ScalarExpr::Exp(Box::new(a)),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, ScalarExpr::Const(_))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            ScalarExpr::Const(c) => *c,
            ScalarExpr::Z => z,
            ScalarExpr::Neg(a) => -a.eval(z),
            ScalarExpr::Add(a, b) => a.eval(z) + b.eval(z),
            ScalarExpr::Sub(a, b) => a.eval(z) - b.eval(z),
            ScalarExpr::Mul(a, b) => a.eval(z) * b.eval(z),
            ScalarExpr::Exp(a) => a.eval(z).exp(),
        }
    }

    /// Symbolic d/dz.
    pub fn derivative(&self) -> ScalarExpr {
        match self {
            ScalarExpr::Const(_) => ScalarExpr::Const(ZERO),
            ScalarExpr::Z => ScalarExpr::Const(ONE),
            ScalarExpr::Neg(a) => ScalarExpr::neg(a.derivative()),
            ScalarExpr::Add(a, b) => ScalarExpr::add(a.derivative(), b.derivative()),
            ScalarExpr::Sub(a, b) => ScalarExpr::sub(a.derivative(), b.derivative()),
            ScalarExpr::Mul(a, b) => ScalarExpr::add(
                ScalarExpr::mul(a.derivative(), (**b).clone()),
                ScalarExpr::mul((**a).clone(), b.derivative()),
            ),
            ScalarExpr::Exp(a) => ScalarExpr::mul(a.derivative(), self.clone()),
        }
    }

    pub fn nth_derivative(&self, k: usize) -> ScalarExpr {
        (0..k).fold(self.clone(), |e, _| e.derivative())
    }

    /// Rebuilds the tree through the smart constructors.
    pub fn normalized(&self) -> ScalarExpr {
        match self {
            ScalarExpr::Const(_) | ScalarExpr::Z => self.clone(),
            ScalarExpr::Neg(a) => ScalarExpr::neg(a.normalized()),
            ScalarExpr::Add(a, b) => ScalarExpr::add(a.normalized(), b.normalized()),
            ScalarExpr::Sub(a, b) => ScalarExpr::sub(a.normalized(), b.normalized()),
            ScalarExpr::Mul(a, b) => ScalarExpr::mul(a.normalized(), b.normalized()),
            ScalarExpr::Exp(a) => ScalarExpr::exp(a.normalized()),
        }
    }
}

/// Literal text that parses back to exactly `c`.
pub(crate) fn format_complex(c: Complex64) -> String {
    fn mag(x: f64) -> String {
        format!("{:?}", x.abs())
    }
    let neg_re = c.re.is_sign_negative() && c.re != 0.0;
    let neg_im = c.im.is_sign_negative() && c.im != 0.0;
    if c.im == 0.0 {
        if neg_re {
            format!("(-{})", mag(c.re))
        } else {
            mag(c.re)
        }
    } else if c.re == 0.0 {
        if neg_im {
            format!("(-{}i)", mag(c.im))
        } else {
            format!("{}i", mag(c.im))
        }
    } else {
        format!(
            "({}{}{}{}i)",
            if neg_re { "-" } else { "" },
            mag(c.re),
            if neg_im { "-" } else { "+" },
            mag(c.im)
        )
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarExpr::Const(c) => write!(f, "{}", format_complex(*c)),
            ScalarExpr::Z => write!(f, "z"),
            ScalarExpr::Neg(a) => write!(f, "(-{a})"),
            ScalarExpr::Add(a, b) => write!(f, "({a} + {b})"),
            ScalarExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            ScalarExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            ScalarExpr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}
