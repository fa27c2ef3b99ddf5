use crate::error::{Error, Result};
use crate::simworld::Anchor;
use crate::Scalar;

/// Round-robin polling order over every anchor in the network.
///
/// Only one anchor can be ranged at a time, so the aggregate ranging rate is
/// shared evenly between fixed and mobile anchors.
#[derive(Clone, Debug)]
pub struct RoundRobin {
    ids: Vec<u32>,
    cursor: usize,
}

impl RoundRobin {
    pub fn new<T: Scalar>(anchors: &[Anchor<T>], start: usize) -> Result<Self> {
        if anchors.is_empty() {
            return Err(Error::Config("cannot schedule ranging over an empty network".into()));
        }
        Ok(Self { ids: anchors.iter().map(|a| a.id).collect(), cursor: start % anchors.len() })
    }

    /// Id of the next anchor to range against.
    pub fn next_anchor(&mut self) -> u32 {
        let id = self.ids[self.cursor];
        self.cursor = (self.cursor + 1) % self.ids.len();
        id
    }
}
