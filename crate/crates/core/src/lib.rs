//! Exact arithmetic with nilpotent infinitesimals.
//!
//! [`FermatReal`] implements the ring of Fermat reals: standard reals
//! extended by the nilpotent classes of `|t|^q`, where products of order
//! above `|t|` vanish. On top of it, smooth expressions ([`expr`]) lift to
//! exact Taylor sums, so derivatives are read off as coefficients rather
//! than approximated. [`weil`] provides the multivariate analogue.
//!
//! ```
//! use nilrad::{expr::parse, lift_eval, FermatEnv, FermatReal};
//!
//! let h = FermatReal::witness(2); // |t|^(1/2), so h² = |t| ≠ 0 and h³ = 0
//! let env: FermatEnv = [("h".to_string(), h)].into_iter().collect();
//! let y = lift_eval(&parse("cos(3*h)").unwrap(), &env).unwrap();
//! assert_eq!(y.to_string(), "1 − 4.5·t^1");
//! ```

mod error;
mod exponent;
pub mod expr;
mod fermat;
mod format;
pub mod json;
mod lift;
pub mod oracle;
pub mod order;
pub mod weil;

pub use error::{Error, Result};
pub use exponent::ExponentQ;
pub use fermat::FermatReal;
pub use format::format_significant;
pub use lift::{
    derive, derive_with, elementary_derivative, infinitesimal_integral, lift_eval, lift_eval_weil, mixed_partial,
    second_derivation_check, FermatEnv, Nilpotent, TaylorJet, WeilEnv,
};

#[cfg(doctest)]
mod book {
    macro_rules! chapters {
        ($($name:ident => $file:literal),* $(,)?) => {
            $(
                #[doc = include_str!(concat!("../../../book/src/", $file))]
                mod $name {}
            )*
        };
    }

    chapters! {
        introduction => "introduction.md",
        fermat_reals => "fermat-reals.md",
        order => "order.md",
        lifting => "lifting.md",
        mixed_partials => "mixed-partials.md",
        weil => "weil.md",
        json => "json.md",
        cli => "cli.md",
        grammar => "grammar.md",
    }
}
