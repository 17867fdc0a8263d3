//! Characteristic functions and small finite fields.

pub mod charfn;
pub mod field;

pub use charfn::{
    circledast, index_digits, q_field, q_general, q_prime, shift_identity_prime, FieldChar,
    GeneralChar, PrimeChar,
};
pub use field::{find_irreducible, is_irreducible, FieldSpec};
