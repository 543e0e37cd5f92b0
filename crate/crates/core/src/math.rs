//! Scalar math routed through `std` or `libm` so the crate builds without a
//! standard library.

#[cfg(feature = "std")]
macro_rules! shim {
    ($(fn $name:ident($($arg:ident),+) => $std_call:expr, $libm_fn:path;)*) => {
        $(
            #[inline]
            pub fn $name($($arg: f64),+) -> f64 { $std_call }
        )*
    };
}

#[cfg(not(feature = "std"))]
macro_rules! shim {
    ($(fn $name:ident($($arg:ident),+) => $std_call:expr, $libm_fn:path;)*) => {
        $(
            #[inline]
            pub fn $name($($arg: f64),+) -> f64 { $libm_fn($($arg),+) }
        )*
    };
}

shim! {
    fn exp(x) => x.exp(), libm::exp;
    fn ln(x) => x.ln(), libm::log;
    fn sqrt(x) => x.sqrt(), libm::sqrt;
    fn sin(x) => x.sin(), libm::sin;
    fn cos(x) => x.cos(), libm::cos;
    fn sinh(x) => x.sinh(), libm::sinh;
    fn cosh(x) => x.cosh(), libm::cosh;
    fn tanh(x) => x.tanh(), libm::tanh;
    fn abs(x) => x.abs(), libm::fabs;
    fn floor(x) => x.floor(), libm::floor;
    fn round(x) => x.round(), libm::round;
    fn atan2(y, x) => y.atan2(x), libm::atan2;
    fn powf(x, y) => x.powf(y), libm::pow;
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    sqrt(x * x + y * y)
}

/// Largest |z| for which e^{±z} and e^{±2z} stay comfortably inside f64 range.
pub const EXP_ARG_LIMIT: f64 = 350.0;
