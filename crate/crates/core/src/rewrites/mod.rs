//! Syntactic transformations between sentence classes.

mod connected;
mod csp;
mod gmsnp;
mod split;

pub use connected::rewrite_connected;
pub use csp::{csp_to_asnp, parse_csp, CspDescription, RelationDefinition};
pub use gmsnp::{gmsnp_translate, GmsnpTranslation, TranslationMap};
pub use split::split_disconnected;
