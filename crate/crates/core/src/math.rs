//! Float functions that resolve to `std` intrinsics or `libm`, so the rest of
//! the crate is written once and stays `no_std`-compatible.

#![allow(dead_code)]

macro_rules! shim {
    ($(fn $name:ident($($arg:ident),+) => $libm:ident;)+) => {
        $(
            #[cfg(feature = "std")]
            #[inline(always)]
            pub fn $name($($arg: f64),+) -> f64 {
                f64::$name($($arg),+)
            }

            #[cfg(all(not(feature = "std"), feature = "libm"))]
            #[inline(always)]
            pub fn $name($($arg: f64),+) -> f64 {
                libm::$libm($($arg),+)
            }
        )+
    };
}

shim! {
    fn ln(x) => log;
    fn log2(x) => log2;
    fn log10(x) => log10;
    fn sqrt(x) => sqrt;
    fn cos(x) => cos;
    fn sin(x) => sin;
    fn abs(x) => fabs;
    fn powf(x, y) => pow;
}

#[inline(always)]
pub fn sq(x: f64) -> f64 {
    x * x
}

/// dBm to linear watts.
#[inline]
pub fn dbm_to_watts(dbm: f64) -> f64 {
    powf(10.0, (dbm - 30.0) / 10.0)
}

/// dB attenuation to linear power gain.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    powf(10.0, db / 10.0)
}
