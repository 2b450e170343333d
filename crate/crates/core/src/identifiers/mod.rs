//! Identifier syntax, identification spaces, minting with provenance and
//! uniqueness accounting.

mod audit;
mod mint;
mod space;
mod uri;

pub use audit::{uniqueness_audit, Collision};
pub use mint::{render_token, Clock, FixedClock, Identification, MintError, Minter, SystemClock, MINT_RETRY_BOUND};
pub use space::{is_gupri, Gupri, IdentificationSpace, Identifier};
pub use uri::{check_uri_syntax, UriParts, UriRejection};
