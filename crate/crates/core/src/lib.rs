//! b-symbol weights of irreducible cyclic codes over odd-characteristic
//! finite fields: field arithmetic, exact enumerators, closed forms and the
//! checks that tie them together.

pub mod code;
pub mod conway;
pub mod field;
pub mod numtheory;
pub mod pb;
pub mod poly;
pub mod table;
pub mod theorems;
pub mod verify;
