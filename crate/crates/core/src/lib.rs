//! Secrecy rate-payoff regions for lossy compression of a Gaussian source
//! against an eavesdropper.
//!
//! ```
//! use gauss_secrecy::model::RatePair;
//! use gauss_secrecy::schemes::{jointly_gaussian_payoff, optimal_high_key_payoff};
//!
//! let rates = RatePair::new(2.7, 1.0)?;
//! assert!(optimal_high_key_payoff(rates)?.value() > jointly_gaussian_payoff(rates).value());
//! # Ok::<(), gauss_secrecy::error::Error>(())
//! ```

#![allow(clippy::excessive_precision)]

pub mod error;
pub mod lp;
pub mod model;
pub mod quadrature;
pub mod quantizer;
pub mod schemes;
pub mod sim;
pub mod special;
pub mod verify;

macro_rules! book_chapters {
    ($($name:ident => $file:literal),* $(,)?) => {
        $(
            #[cfg(doctest)]
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            mod $name {}
        )*
    };
}

book_chapters! {
    book_introduction => "introduction.md",
    book_model => "model.md",
    book_schemes => "schemes.md",
    book_quantizer => "quantizer.md",
    book_quantized_schemes => "quantized-schemes.md",
    book_lp => "lp.md",
    book_simulation => "simulation.md",
    book_verification => "verification.md",
    book_cli => "cli.md",
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
