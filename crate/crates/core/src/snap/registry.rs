use std::collections::BTreeMap;
use std::path::Path;
use std::sync::{Arc, PoisonError, RwLock};

use serde::{Deserialize, Serialize};

use crate::geometry::{PlanarPoint, WorkspaceBounds};

use super::SnapError;

/// A selectable object, e.g. a detected bolt.
#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub id: String,
    pub label: String,
    pub position: PlanarPoint,
    pub group: Option<String>,
    /// Free-form side annotation used by board layouts ("dominant", ...).
    pub side: Option<String>,
}

impl Target {
    pub fn new(id: impl Into<String>, u: f64, v: f64) -> Self {
        let id = id.into();
        Self {
            label: id.clone(),
            id,
            position: PlanarPoint::new(u, v),
            group: None,
            side: None,
        }
    }

    pub fn with_group(mut self, group: impl Into<String>) -> Self {
        self.group = Some(group.into());
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// An axis-aligned rectangle in the workplane frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Area {
    pub id: String,
    pub center: PlanarPoint,
    pub half_extent: (f64, f64),
}

impl Area {
    pub fn new(id: impl Into<String>, cu: f64, cv: f64, hu: f64, hv: f64) -> Result<Self, SnapError> {
        let id = id.into();
        if !(hu > 0.0 && hv > 0.0 && hu.is_finite() && hv.is_finite() && cu.is_finite() && cv.is_finite()) {
            return Err(SnapError::InvalidArea(id));
        }
        Ok(Self {
            id,
            center: PlanarPoint::new(cu, cv),
            half_extent: (hu, hv),
        })
    }

    /// Square of side `side` centered at `(cu, cv)`.
    pub fn square(id: impl Into<String>, cu: f64, cv: f64, side: f64) -> Result<Self, SnapError> {
        Self::new(id, cu, cv, side / 2.0, side / 2.0)
    }

    /// Boundary counts as inside.
    pub fn contains(&self, p: &PlanarPoint) -> bool {
        (p.u - self.center.u).abs() <= self.half_extent.0 && (p.v - self.center.v).abs() <= self.half_extent.1
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TargetRecord {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    u: f64,
    v: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    side: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct AreaRecord {
    id: String,
    cu: f64,
    cv: f64,
    hu: f64,
    hv: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct RegistryFile {
    #[serde(default)]
    targets: Vec<TargetRecord>,
    #[serde(default)]
    areas: Vec<AreaRecord>,
}

/// Known targets and areas, keyed by unique id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Registry {
    targets: BTreeMap<String, Target>,
    areas: BTreeMap<String, Area>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_target(&mut self, target: Target) -> Result<(), SnapError> {
        if !target.position.is_finite() {
            return Err(SnapError::MalformedFile(format!("target {} has non-finite position", target.id)));
        }
        if self.targets.contains_key(&target.id) {
            return Err(SnapError::DuplicateId(target.id));
        }
        self.targets.insert(target.id.clone(), target);
        Ok(())
    }

    pub fn remove_target(&mut self, id: &str) -> Result<Target, SnapError> {
        self.targets
            .remove(id)
            .ok_or_else(|| SnapError::UnknownId(id.to_string()))
    }

    /// Targets in id order.
    pub fn list_targets(&self) -> Vec<&Target> {
        self.targets.values().collect()
    }

    pub fn targets(&self) -> Vec<Target> {
        self.targets.values().cloned().collect()
    }

    pub fn add_area(&mut self, area: Area) -> Result<(), SnapError> {
        if self.areas.contains_key(&area.id) {
            return Err(SnapError::DuplicateId(area.id));
        }
        self.areas.insert(area.id.clone(), area);
        Ok(())
    }

    pub fn remove_area(&mut self, id: &str) -> Result<Area, SnapError> {
        self.areas
            .remove(id)
            .ok_or_else(|| SnapError::UnknownId(id.to_string()))
    }

    pub fn list_areas(&self) -> Vec<&Area> {
        self.areas.values().collect()
    }

    pub fn areas(&self) -> Vec<Area> {
        self.areas.values().cloned().collect()
    }

    /// Ids of targets or areas lying outside the workspace.
    pub fn out_of_bounds(&self, bounds: &WorkspaceBounds) -> Vec<String> {
        let mut ids: Vec<String> = self
            .targets
            .values()
            .filter(|t| !bounds.contains(&t.position))
            .map(|t| t.id.clone())
            .collect();
        let (umin, vmin, umax, vmax) = bounds.bbox();
        ids.extend(
            self.areas
                .values()
                .filter(|a| {
                    a.center.u + a.half_extent.0 < umin
                        || a.center.u - a.half_extent.0 > umax
                        || a.center.v + a.half_extent.1 < vmin
                        || a.center.v - a.half_extent.1 > vmax
                })
                .map(|a| a.id.clone()),
        );
        ids
    }

    pub fn from_json_str(s: &str) -> Result<Self, SnapError> {
        let file: RegistryFile =
            serde_json::from_str(s).map_err(|e| SnapError::MalformedFile(e.to_string()))?;
        let mut reg = Registry::new();
        for t in file.targets {
            reg.add_target(Target {
                label: t.label.unwrap_or_else(|| t.id.clone()),
                id: t.id,
                position: PlanarPoint::new(t.u, t.v),
                group: t.group,
                side: t.side,
            })?;
        }
        for a in file.areas {
            reg.add_area(Area::new(a.id, a.cu, a.cv, a.hu, a.hv)?)?;
        }
        Ok(reg)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let file = RegistryFile {
            targets: self
                .targets
                .values()
                .map(|t| TargetRecord {
                    id: t.id.clone(),
                    label: Some(t.label.clone()),
                    group: t.group.clone(),
                    u: t.position.u,
                    v: t.position.v,
                    side: t.side.clone(),
                })
                .collect(),
            areas: self
                .areas
                .values()
                .map(|a| AreaRecord {
                    id: a.id.clone(),
                    cu: a.center.u,
                    cv: a.center.v,
                    hu: a.half_extent.0,
                    hv: a.half_extent.1,
                })
                .collect(),
        };
        serde_json::to_value(file).expect("registry serialization is infallible")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("registry serialization is infallible")
    }

    pub fn from_file(path: &Path) -> Result<Self, SnapError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SnapError::MalformedFile(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// Replace the whole registry with the file's contents. On error the
    /// registry is left unchanged.
    pub fn load_file(&mut self, path: &Path) -> Result<(), SnapError> {
        *self = Self::from_file(path)?;
        Ok(())
    }
}

/// Registry handle shared between readers and an occasional writer.
#[derive(Debug, Clone, Default)]
pub struct SharedRegistry(Arc<RwLock<Registry>>);

impl SharedRegistry {
    pub fn new(reg: Registry) -> Self {
        Self(Arc::new(RwLock::new(reg)))
    }

    /// A consistent copy for evaluating strategies without holding the lock.
    pub fn snapshot(&self) -> Registry {
        self.0.read().unwrap_or_else(PoisonError::into_inner).clone()
    }

    pub fn write<R>(&self, f: impl FnOnce(&mut Registry) -> R) -> R {
        let mut guard = self.0.write().unwrap_or_else(PoisonError::into_inner);
        f(&mut guard)
    }

    pub fn load_file(&self, path: &Path) -> Result<(), SnapError> {
        let fresh = Registry::from_file(path)?;
        self.write(|r| *r = fresh);
        Ok(())
    }
}
