//! Core entropy, kneading polynomials and Master Teapot point clouds for
//! critically periodic quadratic maps on the principal veins of the
//! Mandelbrot set.

pub mod acceptance;
pub mod angles;
pub mod kneading;
pub mod markov;
pub mod mp;
pub mod oracles;
pub mod polyalg;
pub mod teapot;
pub mod wedge;
pub mod words;
