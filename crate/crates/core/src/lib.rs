//! Permanents and hafnians modulo powers of two, and the disjoint cycle and
//! path solvers built on top of them.

pub mod formats;
pub mod gf2poly;
pub mod hafnian;
pub mod linalg;
pub mod oracles;
pub mod permanent;
pub mod poly_text;
pub mod ring;
pub mod sdc;
pub mod selftest;
pub mod zpoly;
