use std::path::Path;

use serde_json::json;

use gesture_pointer::eval::{make_board, BoardKind};
use gesture_pointer::snap::{Area, Registry, SnapError, Target};

use crate::args::{BoardArg, RegistryAction};
use crate::config::Settings;
use crate::error::{CliError, CliResult, ResultExt};
use crate::io::write_atomic;

use super::sweep::eval_error;

fn snap_error(e: SnapError) -> CliError {
    CliError::Usage(e.into())
}

fn load(path: &Path, create: bool) -> CliResult<Registry> {
    if create && !path.exists() {
        return Ok(Registry::new());
    }
    Registry::from_file(path).map_err(snap_error)
}

fn save(path: &Path, contents: &str) -> CliResult<()> {
    write_atomic(path, format!("{contents}\n").as_bytes()).or_runtime(format!("writing {}", path.display()))
}

pub fn run(action: &RegistryAction, settings: &Settings) -> CliResult<()> {
    let path = settings.require_registry()?;
    match action {
        RegistryAction::List => {
            let reg = load(path, false)?;
            for t in reg.list_targets() {
                let line = json!({
                    "kind": "target", "id": t.id, "label": t.label, "group": t.group,
                    "side": t.side, "u": t.position.u, "v": t.position.v,
                });
                println!("{line}");
            }
            for a in reg.list_areas() {
                let line = json!({
                    "kind": "area", "id": a.id, "cu": a.center.u, "cv": a.center.v,
                    "hu": a.half_extent.0, "hv": a.half_extent.1,
                });
                println!("{line}");
            }
        }
        RegistryAction::AddTarget {
            id,
            u,
            v,
            label,
            group,
            side,
        } => {
            let mut reg = load(path, true)?;
            let mut t = Target::new(id.clone(), *u, *v);
            if let Some(l) = label {
                t = t.with_label(l.clone());
            }
            t.group = group.clone();
            t.side = side.clone();
            reg.add_target(t).map_err(snap_error)?;
            save(path, &reg.to_json_string())?;
        }
        RegistryAction::AddArea { id, cu, cv, hu, hv } => {
            let mut reg = load(path, true)?;
            reg.add_area(Area::new(id.clone(), *cu, *cv, *hu, *hv).map_err(snap_error)?)
                .map_err(snap_error)?;
            save(path, &reg.to_json_string())?;
        }
        RegistryAction::Remove { id } => {
            let mut reg = load(path, false)?;
            if reg.remove_target(id).is_err() {
                reg.remove_area(id).map_err(snap_error)?;
            }
            save(path, &reg.to_json_string())?;
        }
        RegistryAction::Board { kind, l } => {
            let kind = match kind {
                BoardArg::Quantitative10 => BoardKind::Quantitative10,
                BoardArg::PickSquare => BoardKind::PickSquare,
                BoardArg::PlaceAreas => BoardKind::PlaceAreas,
            };
            let board = make_board(kind, *l).map_err(eval_error)?;
            save(path, &board.to_json_string().map_err(eval_error)?)?;
        }
    }
    Ok(())
}
