//! Ground-truth detection synthesis: field-of-view, range, and wall
//! occlusion tests, plus the projection onto normalized image coordinates.
//!
//! An object is visible iff
//! (a) its bearing is within +/-45 degrees of the heading,
//! (b) its elevation is within +/-30 degrees of the pitch,
//! (c) its horizontal distance is at most 5 m, and
//! (d) no wall cell touches the open segment between agent and object
//!     cell centers (supercover traversal).
//! An object on the agent's own cell has no defined bearing and is not
//! visible. Rule (a) is evaluated in exact integer arithmetic: with the
//! offset rotated into the agent frame as (lateral, forward), the bearing
//! cone is `forward >= |lateral|`.

use alloc::vec::Vec;

use super::{
    AgentPose, Cell, Detection, Scene, SceneObject, CELL_METERS, EYE_HEIGHT_METERS, FOV_H_DEG,
    FOV_V_DEG, MAX_VIEW_METERS, SUCCESS_RADIUS_METERS,
};
use crate::math;

/// tan(FOV_H / 2) for the box-area projection; the horizontal FOV is 90
/// degrees, so this is exactly 1.
const TAN_HALF_FOV_H: f64 = 1.0;

/// Smallest and largest normalized box area.
const AREA_MIN: f64 = 1e-4;
const AREA_MAX: f64 = 1.0;

/// Every grid cell whose closed unit square the segment between the
/// centers of `a` and `b` touches, including cells met only at a corner.
pub fn supercover_line(a: Cell, b: Cell) -> Vec<Cell> {
    let mut cells = alloc::vec![a];
    let (mut x, mut z) = (a.x, a.z);
    let sx = (b.x - a.x).signum();
    let sz = (b.z - a.z).signum();
    let dx = (b.x - a.x).abs();
    let dz = (b.z - a.z).abs();
    let ddx = 2 * dx;
    let ddz = 2 * dz;
    if ddx >= ddz {
        let mut error = dx;
        let mut error_prev = dx;
        for _ in 0..dx {
            x += sx;
            error += ddz;
            if error > ddx {
                z += sz;
                error -= ddx;
                match (error + error_prev).cmp(&ddx) {
                    core::cmp::Ordering::Less => cells.push(Cell::new(x, z - sz)),
                    core::cmp::Ordering::Greater => cells.push(Cell::new(x - sx, z)),
                    core::cmp::Ordering::Equal => {
                        // exact corner crossing touches both side cells
                        cells.push(Cell::new(x, z - sz));
                        cells.push(Cell::new(x - sx, z));
                    }
                }
            }
            cells.push(Cell::new(x, z));
            error_prev = error;
        }
    } else {
        let mut error = dz;
        let mut error_prev = dz;
        for _ in 0..dz {
            z += sz;
            error += ddx;
            if error > ddz {
                x += sx;
                error -= ddz;
                match (error + error_prev).cmp(&ddz) {
                    core::cmp::Ordering::Less => cells.push(Cell::new(x - sx, z)),
                    core::cmp::Ordering::Greater => cells.push(Cell::new(x, z - sz)),
                    core::cmp::Ordering::Equal => {
                        cells.push(Cell::new(x - sx, z));
                        cells.push(Cell::new(x, z - sz));
                    }
                }
            }
            cells.push(Cell::new(x, z));
            error_prev = error;
        }
    }
    cells
}

/// Whether a wall blocks the sight line from `from` to `to`. The endpoint
/// cells themselves never occlude.
fn sight_blocked(scene: &Scene, from: Cell, to: Cell) -> bool {
    supercover_line(from, to)
        .into_iter()
        .any(|cell| cell != from && cell != to && scene.is_wall(cell))
}

/// Visibility test plus projection for a single object. Returns `None`
/// when any of rules (a)-(d) fails.
fn project_object(scene: &Scene, pose: &AgentPose, obj: &SceneObject) -> Option<Detection> {
    let dx = obj.cell.x - pose.cell.x;
    let dz = obj.cell.z - pose.cell.z;
    if dx == 0 && dz == 0 {
        return None;
    }
    // (a) bearing cone, exact in integers
    let (lateral, forward) = pose.heading.to_local(dx, dz);
    if forward < lateral.abs() {
        return None;
    }
    // (c) range
    let distance = CELL_METERS * math::sqrt((dx * dx + dz * dz) as f64);
    if distance > MAX_VIEW_METERS {
        return None;
    }
    // (b) elevation relative to pitch
    let elevation = math::atan2(obj.height - EYE_HEIGHT_METERS, distance).to_degrees();
    let elev_rel = elevation - f64::from(pose.pitch.degrees());
    if elev_rel.abs() > FOV_V_DEG / 2.0 {
        return None;
    }
    // (d) wall occlusion
    if sight_blocked(scene, pose.cell, obj.cell) {
        return None;
    }
    let bearing = math::atan2(lateral as f64, forward as f64).to_degrees();
    let area_raw = obj.size / (distance * 2.0 * TAN_HALF_FOV_H);
    Some(Detection {
        class_name: obj.class_name.clone(),
        x_c: 0.5 + bearing / FOV_H_DEG,
        y_c: 0.5 - elev_rel / FOV_V_DEG,
        area: (area_raw * area_raw).clamp(AREA_MIN, AREA_MAX),
        distance,
    })
}

/// Ground-truth detections at a pose, in scene object order.
pub fn visible_objects(scene: &Scene, pose: &AgentPose) -> Vec<Detection> {
    scene
        .objects
        .iter()
        .filter_map(|obj| project_object(scene, pose, obj))
        .collect()
}

/// Whether issuing `Done` at this pose succeeds: some instance of the
/// target class is within the success radius and currently visible.
pub fn pose_is_goal(scene: &Scene, pose: &AgentPose, target: &str) -> bool {
    // 1.5 m = 3 cells, compared as squared cell counts
    let radius_cells_sq = {
        let r = SUCCESS_RADIUS_METERS / CELL_METERS;
        (r * r) as i32
    };
    scene.objects.iter().any(|obj| {
        if obj.class_name != target {
            return false;
        }
        let dx = obj.cell.x - pose.cell.x;
        let dz = obj.cell.z - pose.cell.z;
        dx * dx + dz * dz <= radius_cells_sq && project_object(scene, pose, obj).is_some()
    })
}
