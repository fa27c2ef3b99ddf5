use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnchorRole {
    #[default]
    Fixed,
    Mobile,
}

/// A ranging beacon at a known position.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct Anchor<T> {
    pub id: u32,
    pub position: Vec3<T>,
    #[serde(default)]
    pub role: AnchorRole,
}

impl<T: Scalar> Anchor<T> {
    pub fn fixed(id: u32, position: Vec3<T>) -> Self {
        Self { id, position, role: AnchorRole::Fixed }
    }

    pub fn mobile(id: u32, position: Vec3<T>) -> Self {
        Self { id, position, role: AnchorRole::Mobile }
    }

    pub fn is_mobile(&self) -> bool {
        self.role == AnchorRole::Mobile
    }
}

/// Checks that a network is non-empty, ids are unique and positions finite.
pub fn validate_network<T: Scalar>(anchors: &[Anchor<T>]) -> Result<()> {
    if anchors.is_empty() {
        return Err(Error::Config("anchor network is empty".into()));
    }
    for (i, a) in anchors.iter().enumerate() {
        if !a.position.is_finite() {
            return Err(Error::Config(format!("anchor {} has a non-finite position", a.id)));
        }
        if anchors[..i].iter().any(|b| b.id == a.id) {
            return Err(Error::Config(format!("duplicate anchor id {}", a.id)));
        }
    }
    Ok(())
}
