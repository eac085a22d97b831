pub(crate) use alloc::collections::BTreeMap;
pub(crate) use alloc::vec;
pub(crate) use alloc::vec::Vec;
#[allow(unused_imports)]
pub(crate) use num_traits::Float;

pub(crate) use crate::error::{Error, Result};
pub(crate) use crate::C64;
