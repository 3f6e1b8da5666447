use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::geometry::PlanarPoint;
use crate::snap::{Area, Registry, Target};

use super::EvalError;

/// Board extent along the workplane u axis (the user's left-right).
pub const BOARD_WIDTH: f64 = 0.80;
/// Board extent along v (away from the user).
pub const BOARD_DEPTH: f64 = 0.60;

/// Side distances of the pick series, largest first.
pub const PICK_SERIES: [f64; 8] = [0.40, 0.30, 0.20, 0.10, 0.08, 0.06, 0.04, 0.02];
/// Area sizes of the place series.
pub const PLACE_SERIES: [f64; 3] = [0.20, 0.10, 0.05];

const QUANTITATIVE_10: &str = include_str!("../../data/quantitative_10.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoardKind {
    #[serde(rename = "quantitative_10")]
    Quantitative10,
    PickSquare,
    PlaceAreas,
}

impl BoardKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoardKind::Quantitative10 => "quantitative_10",
            BoardKind::PickSquare => "pick_square",
            BoardKind::PlaceAreas => "place_areas",
        }
    }
}

impl fmt::Display for BoardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoardKind {
    type Err = EvalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quantitative_10" => Ok(BoardKind::Quantitative10),
            "pick_square" => Ok(BoardKind::PickSquare),
            "place_areas" => Ok(BoardKind::PlaceAreas),
            _ => Err(EvalError::InvalidParameters(format!("unknown board kind {s:?}"))),
        }
    }
}

/// Targets or areas laid out on the board, in workplane coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct BoardLayout {
    pub kind: BoardKind,
    /// Side distance (pick) or area size (place).
    pub l: Option<f64>,
    pub targets: Vec<Target>,
    pub areas: Vec<Area>,
}

fn on_board(p: &PlanarPoint) -> bool {
    (0.0..=BOARD_WIDTH).contains(&p.u) && (0.0..=BOARD_DEPTH).contains(&p.v)
}

fn side_of(u: f64) -> &'static str {
    if u >= BOARD_WIDTH / 2.0 {
        "right"
    } else {
        "left"
    }
}

fn check_size(kind: BoardKind, l: Option<f64>) -> Result<f64, EvalError> {
    match l {
        Some(l) if l > 0.0 && l.is_finite() => Ok(l),
        Some(l) => Err(EvalError::InvalidParameters(format!("{kind} size must be positive, got {l}"))),
        None => Err(EvalError::InvalidParameters(format!("{kind} needs a size parameter"))),
    }
}

/// Build one of the standard layouts.
///
/// `l` is the square's side distance for `pick_square` and the area side for
/// `place_areas`; `quantitative_10` takes no parameter.
pub fn make_board(kind: BoardKind, l: Option<f64>) -> Result<BoardLayout, EvalError> {
    let cu = BOARD_WIDTH / 2.0;
    let cv = BOARD_DEPTH / 2.0;
    let board = match kind {
        BoardKind::Quantitative10 => {
            if l.is_some() {
                return Err(EvalError::InvalidParameters("quantitative_10 takes no size".into()));
            }
            return load_board(QUANTITATIVE_10);
        }
        BoardKind::PickSquare => {
            let l = check_size(kind, l)?;
            let h = l / 2.0;
            // B1/B2 on the right (dominant) side, B1/B3 in the far row.
            let targets = [("B1", h, h), ("B2", h, -h), ("B3", -h, h), ("B4", -h, -h)]
                .into_iter()
                .map(|(id, du, dv)| {
                    let mut t = Target::new(id, cu + du, cv + dv).with_group("bolt");
                    t.side = Some(side_of(cu + du).to_string());
                    t
                })
                .collect();
            BoardLayout {
                kind,
                l: Some(l),
                targets,
                areas: Vec::new(),
            }
        }
        BoardKind::PlaceAreas => {
            let l = check_size(kind, l)?;
            let areas = [("A1", -l), ("A2", 0.0), ("A3", l)]
                .into_iter()
                .map(|(id, du)| Area::square(id, cu + du, cv, l))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| EvalError::InvalidParameters(e.to_string()))?;
            BoardLayout {
                kind,
                l: Some(l),
                targets: Vec::new(),
                areas,
            }
        }
    };
    board.validate()?;
    Ok(board)
}

impl BoardLayout {
    pub fn validate(&self) -> Result<(), EvalError> {
        for t in &self.targets {
            if !on_board(&t.position) {
                return Err(EvalError::InvalidParameters(format!("target {} leaves the board", t.id)));
            }
        }
        for a in &self.areas {
            let (hu, hv) = a.half_extent;
            let lo = a.center.offset(-hu, -hv);
            let hi = a.center.offset(hu, hv);
            if !on_board(&lo) || !on_board(&hi) {
                return Err(EvalError::InvalidParameters(format!("area {} leaves the board", a.id)));
            }
        }
        Ok(())
    }

    /// Aim points with their ids: target positions or area centers.
    pub fn aim_points(&self) -> Vec<(String, PlanarPoint)> {
        self.targets
            .iter()
            .map(|t| (t.id.clone(), t.position))
            .chain(self.areas.iter().map(|a| (a.id.clone(), a.center)))
            .collect()
    }

    pub fn to_registry(&self) -> Result<Registry, EvalError> {
        let mut r = Registry::new();
        for t in &self.targets {
            r.add_target(t.clone()).map_err(|e| EvalError::InvalidParameters(e.to_string()))?;
        }
        for a in &self.areas {
            r.add_area(a.clone()).map_err(|e| EvalError::InvalidParameters(e.to_string()))?;
        }
        Ok(r)
    }

    /// Registry-compatible JSON with an extra `board` block.
    pub fn to_json_string(&self) -> Result<String, EvalError> {
        let mut doc = self.to_registry()?.to_json_value();
        doc["board"] = json!({
            "kind": self.kind.as_str(),
            "l_m": self.l,
            "width_m": BOARD_WIDTH,
            "depth_m": BOARD_DEPTH,
        });
        Ok(serde_json::to_string_pretty(&doc).expect("board serialization is infallible"))
    }
}

#[derive(Deserialize)]
struct BoardMeta {
    kind: BoardKind,
    #[serde(default)]
    l_m: Option<f64>,
}

#[derive(Deserialize)]
struct BoardHeader {
    board: BoardMeta,
}

/// Parse a board file: a registry file with a `board` block naming its kind.
pub fn load_board(text: &str) -> Result<BoardLayout, EvalError> {
    let header: BoardHeader =
        serde_json::from_str(text).map_err(|e| EvalError::InvalidParameters(format!("board file: {e}")))?;
    let reg = Registry::from_json_str(text).map_err(|e| EvalError::InvalidParameters(e.to_string()))?;
    let board = BoardLayout {
        kind: header.board.kind,
        l: header.board.l_m,
        targets: reg.targets(),
        areas: reg.areas(),
    };
    if board.targets.is_empty() && board.areas.is_empty() {
        return Err(EvalError::InvalidParameters("board file defines no targets or areas".into()));
    }
    board.validate()?;
    Ok(board)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pick_square_geometry() {
        let b = make_board(BoardKind::PickSquare, Some(0.10)).unwrap();
        let got: Vec<_> = b.targets.iter().map(|t| (t.id.as_str(), t.position.u, t.position.v)).collect();
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        let expect = [("B1", 0.45, 0.35), ("B2", 0.45, 0.25), ("B3", 0.35, 0.35), ("B4", 0.35, 0.25)];
        for (g, e) in got.iter().zip(expect) {
            assert_eq!(g.0, e.0);
            assert!(close(g.1, e.1) && close(g.2, e.2), "{g:?}");
        }
        assert_eq!(b.targets[0].side.as_deref(), Some("right"));
        assert_eq!(b.targets[3].side.as_deref(), Some("left"));
    }

    #[test]
    fn oversized_boards_are_rejected() {
        assert!(matches!(
            make_board(BoardKind::PickSquare, Some(0.90)),
            Err(EvalError::InvalidParameters(_))
        ));
        assert!(make_board(BoardKind::PlaceAreas, Some(0.30)).is_err());
        assert!(make_board(BoardKind::PickSquare, None).is_err());
        assert!(make_board(BoardKind::PlaceAreas, Some(-0.1)).is_err());
    }

    #[test]
    fn place_areas_are_disjoint_interiors() {
        for l in PLACE_SERIES {
            let b = make_board(BoardKind::PlaceAreas, Some(l)).unwrap();
            assert_eq!(b.areas.len(), 3);
            for (i, a) in b.areas.iter().enumerate() {
                for c in &b.areas[i + 1..] {
                    let gap = (a.center.u - c.center.u).abs() - a.half_extent.0 - c.half_extent.0;
                    assert!(gap >= -1e-12, "{} overlaps {}", a.id, c.id);
                }
                // Each center belongs to its own area only.
                let owners: Vec<_> = b.areas.iter().filter(|x| x.contains(&a.center)).collect();
                assert_eq!(owners.len(), 1);
            }
        }
    }

    #[test]
    fn quantitative_board_spans_the_plane() {
        let b = make_board(BoardKind::Quantitative10, None).unwrap();
        assert_eq!(b.targets.len(), 10);
        let us: Vec<f64> = b.targets.iter().map(|t| t.position.u).collect();
        assert!(us.iter().all(|u| (0.1 - 1e-12..=0.7 + 1e-12).contains(u)));
        assert_eq!(b.targets.iter().filter(|t| t.position.v < 0.3).count(), 5);
    }

    #[test]
    fn board_files_round_trip() {
        for board in [
            make_board(BoardKind::PickSquare, Some(0.2)).unwrap(),
            make_board(BoardKind::PlaceAreas, Some(0.05)).unwrap(),
            make_board(BoardKind::Quantitative10, None).unwrap(),
        ] {
            let text = board.to_json_string().unwrap();
            let back = load_board(&text).unwrap();
            assert_eq!(back.kind, board.kind);
            assert_eq!(back.to_registry().unwrap(), board.to_registry().unwrap());
            // Board files double as registry files.
            assert!(Registry::from_json_str(&text).is_ok());
        }
    }
}
