//! Cobordisms between diagrams and their chain maps.

pub mod event;
pub mod isotopy;
pub(crate) mod local;
pub mod morse;
pub mod movie;
pub mod r3;
pub mod reidemeister;
pub mod simplify;

pub use event::{applicable_events, Event, Step};
pub use isotopy::{find_isotopy, Isotopy};
pub use movie::Movie;
pub use r3::Slide;
pub use simplify::{cap_off, simplify};

#[cfg(test)]
mod tests;
