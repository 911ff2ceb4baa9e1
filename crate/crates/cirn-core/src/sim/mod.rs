//! Deterministic grid-world simulator.
//!
//! One cell is 0.5 m. The agent turns in 90-degree steps, pitches its
//! camera in 30-degree steps, and perceives objects as synthesized
//! ground-truth detections (no rendering). Walls block movement and
//! sight; objects block neither.

mod env;
mod path;
mod vision;

pub use env::Simulator;
pub use path::shortest_path_length;
pub use vision::{pose_is_goal, supercover_line, visible_objects};

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Edge length of one grid cell in meters.
pub const CELL_METERS: f64 = 0.5;
/// Horizontal field of view in degrees.
pub const FOV_H_DEG: f64 = 90.0;
/// Vertical field of view in degrees.
pub const FOV_V_DEG: f64 = 60.0;
/// Detection range in meters.
pub const MAX_VIEW_METERS: f64 = 5.0;
/// Horizontal distance within which a visible target instance lets `Done`
/// succeed, in meters (3 cells).
pub const SUCCESS_RADIUS_METERS: f64 = 1.5;
/// Camera height above the floor in meters; object elevation angles are
/// measured against this.
pub const EYE_HEIGHT_METERS: f64 = 1.0;
/// Default episode step limit.
pub const DEFAULT_MAX_STEPS: u32 = 100;

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("invalid pose: {0}")]
    InvalidPose(String),
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("step called after the episode finished")]
    EpisodeOver,
    #[error("scene object class `{0}` missing from the similarity table")]
    MissingSimilarity(String),
}

/// Grid coordinates `(x, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct Cell {
    pub x: i32,
    pub z: i32,
}

impl Cell {
    pub fn new(x: i32, z: i32) -> Self {
        Self { x, z }
    }
}

impl From<[i32; 2]> for Cell {
    fn from([x, z]: [i32; 2]) -> Self {
        Self { x, z }
    }
}

impl From<Cell> for [i32; 2] {
    fn from(c: Cell) -> Self {
        [c.x, c.z]
    }
}

/// Agent heading, a multiple of 90 degrees. 0 faces +z, 90 faces +x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u16", into = "u16")]
pub enum Heading {
    North,
    East,
    South,
    West,
}

impl Heading {
    pub const ALL: [Heading; 4] = [Heading::North, Heading::East, Heading::South, Heading::West];

    pub fn degrees(self) -> u16 {
        match self {
            Heading::North => 0,
            Heading::East => 90,
            Heading::South => 180,
            Heading::West => 270,
        }
    }

    pub fn index(self) -> usize {
        (self.degrees() / 90) as usize
    }

    pub fn left(self) -> Self {
        match self {
            Heading::North => Heading::West,
            Heading::West => Heading::South,
            Heading::South => Heading::East,
            Heading::East => Heading::North,
        }
    }

    pub fn right(self) -> Self {
        match self {
            Heading::North => Heading::East,
            Heading::East => Heading::South,
            Heading::South => Heading::West,
            Heading::West => Heading::North,
        }
    }

    /// Unit step `(dx, dz)` for MoveAhead.
    pub fn forward(self) -> (i32, i32) {
        match self {
            Heading::North => (0, 1),
            Heading::East => (1, 0),
            Heading::South => (0, -1),
            Heading::West => (-1, 0),
        }
    }

    /// Rotate a world-frame offset into the agent frame: returns
    /// `(lateral, forward)` where lateral is positive to the agent's right.
    /// Exact integer arithmetic because headings are 90-degree multiples.
    pub fn to_local(self, dx: i32, dz: i32) -> (i32, i32) {
        match self {
            Heading::North => (dx, dz),
            Heading::East => (-dz, dx),
            Heading::South => (-dx, -dz),
            Heading::West => (dz, -dx),
        }
    }
}

impl TryFrom<u16> for Heading {
    type Error = String;

    fn try_from(deg: u16) -> Result<Self, Self::Error> {
        match deg {
            0 => Ok(Heading::North),
            90 => Ok(Heading::East),
            180 => Ok(Heading::South),
            270 => Ok(Heading::West),
            other => Err(alloc::format!("heading must be one of 0/90/180/270, got {other}")),
        }
    }
}

impl From<Heading> for u16 {
    fn from(h: Heading) -> Self {
        h.degrees()
    }
}

/// Camera pitch in degrees; positive looks up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i16", into = "i16")]
pub enum Pitch {
    Down30,
    Level,
    Up30,
}

impl Pitch {
    pub const ALL: [Pitch; 3] = [Pitch::Down30, Pitch::Level, Pitch::Up30];

    pub fn degrees(self) -> i16 {
        match self {
            Pitch::Down30 => -30,
            Pitch::Level => 0,
            Pitch::Up30 => 30,
        }
    }

    pub fn index(self) -> usize {
        ((self.degrees() + 30) / 30) as usize
    }

    /// LookUp, clamped at +30.
    pub fn up(self) -> Self {
        match self {
            Pitch::Down30 => Pitch::Level,
            _ => Pitch::Up30,
        }
    }

    /// LookDown, clamped at -30.
    pub fn down(self) -> Self {
        match self {
            Pitch::Up30 => Pitch::Level,
            _ => Pitch::Down30,
        }
    }
}

impl TryFrom<i16> for Pitch {
    type Error = String;

    fn try_from(deg: i16) -> Result<Self, Self::Error> {
        match deg {
            -30 => Ok(Pitch::Down30),
            0 => Ok(Pitch::Level),
            30 => Ok(Pitch::Up30),
            other => Err(alloc::format!("pitch must be one of -30/0/30, got {other}")),
        }
    }
}

impl From<Pitch> for i16 {
    fn from(p: Pitch) -> Self {
        p.degrees()
    }
}

/// The six-action interface. Index order is fixed; evaluation breaks
/// argmax ties toward the lowest index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    MoveAhead,
    RotateLeft,
    RotateRight,
    LookUp,
    LookDown,
    Done,
}

impl Action {
    pub const COUNT: usize = 6;
    pub const ALL: [Action; 6] = [
        Action::MoveAhead,
        Action::RotateLeft,
        Action::RotateRight,
        Action::LookUp,
        Action::LookDown,
        Action::Done,
    ];

    pub fn index(self) -> usize {
        match self {
            Action::MoveAhead => 0,
            Action::RotateLeft => 1,
            Action::RotateRight => 2,
            Action::LookUp => 3,
            Action::LookDown => 4,
            Action::Done => 5,
        }
    }

    pub fn from_index(idx: usize) -> Option<Self> {
        Self::ALL.get(idx).copied()
    }
}

/// A typed object placed on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneObject {
    #[serde(rename = "class")]
    pub class_name: String,
    pub cell: Cell,
    /// Height of the object's visual center above the floor, meters.
    pub height: f64,
    /// Characteristic diameter, meters.
    pub size: f64,
}

/// Agent position and camera orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AgentPose {
    pub cell: Cell,
    pub heading: Heading,
    pub pitch: Pitch,
}

impl AgentPose {
    pub fn new(cell: Cell, heading: Heading, pitch: Pitch) -> Self {
        Self {
            cell,
            heading,
            pitch,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneType {
    Kitchen,
    LivingRoom,
    Bedroom,
    Bathroom,
}

impl SceneType {
    pub const ALL: [SceneType; 4] = [
        SceneType::Kitchen,
        SceneType::LivingRoom,
        SceneType::Bedroom,
        SceneType::Bathroom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SceneType::Kitchen => "kitchen",
            SceneType::LivingRoom => "living_room",
            SceneType::Bedroom => "bedroom",
            SceneType::Bathroom => "bathroom",
        }
    }
}

/// A grid scene: bounds, walls, typed objects, and candidate start poses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub id: String,
    pub scene_type: SceneType,
    pub width: i32,
    pub depth: i32,
    pub walls: BTreeSet<Cell>,
    pub objects: Vec<SceneObject>,
    pub start_poses: Vec<AgentPose>,
}

impl Scene {
    pub fn in_bounds(&self, cell: Cell) -> bool {
        cell.x >= 0 && cell.x < self.width && cell.z >= 0 && cell.z < self.depth
    }

    pub fn is_wall(&self, cell: Cell) -> bool {
        self.walls.contains(&cell)
    }

    /// In bounds and not a wall: the agent may stand here.
    pub fn is_free(&self, cell: Cell) -> bool {
        self.in_bounds(cell) && !self.is_wall(cell)
    }

    pub fn contains_class(&self, class: &str) -> bool {
        self.objects.iter().any(|o| o.class_name == class)
    }

    /// Distinct object classes, sorted.
    pub fn classes(&self) -> Vec<&str> {
        let mut classes: Vec<&str> = self.objects.iter().map(|o| o.class_name.as_str()).collect();
        classes.sort_unstable();
        classes.dedup();
        classes
    }

    pub fn normalize_class_names(&mut self) {
        for obj in &mut self.objects {
            obj.class_name = obj.class_name.to_lowercase();
        }
    }

    /// Structural invariants: positive bounds, everything in bounds and off
    /// walls, object dimensions positive, and a connected free region.
    pub fn validate(&self) -> Result<(), SimError> {
        if self.width < 1 || self.depth < 1 {
            return Err(SimError::InvalidScene(alloc::format!(
                "scene `{}` has empty bounds {}x{}",
                self.id,
                self.width,
                self.depth
            )));
        }
        for wall in &self.walls {
            if !self.in_bounds(*wall) {
                return Err(SimError::InvalidScene(alloc::format!(
                    "scene `{}` wall ({}, {}) out of bounds",
                    self.id,
                    wall.x,
                    wall.z
                )));
            }
        }
        for obj in &self.objects {
            if !self.is_free(obj.cell) {
                return Err(SimError::InvalidScene(alloc::format!(
                    "scene `{}` object `{}` at ({}, {}) is out of bounds or on a wall",
                    self.id,
                    obj.class_name,
                    obj.cell.x,
                    obj.cell.z
                )));
            }
            if obj.size <= 0.0 || obj.height < 0.0 || !obj.size.is_finite() || !obj.height.is_finite()
            {
                return Err(SimError::InvalidScene(alloc::format!(
                    "scene `{}` object `{}` has bad dimensions (height {}, size {})",
                    self.id,
                    obj.class_name,
                    obj.height,
                    obj.size
                )));
            }
        }
        for pose in &self.start_poses {
            if !self.is_free(pose.cell) {
                return Err(SimError::InvalidScene(alloc::format!(
                    "scene `{}` start pose at ({}, {}) is out of bounds or on a wall",
                    self.id,
                    pose.cell.x,
                    pose.cell.z
                )));
            }
        }
        self.check_free_region_connected()
    }

    fn check_free_region_connected(&self) -> Result<(), SimError> {
        let total_free = (0..self.width)
            .flat_map(|x| (0..self.depth).map(move |z| Cell::new(x, z)))
            .filter(|c| self.is_free(*c))
            .count();
        if total_free == 0 {
            return Err(SimError::InvalidScene(alloc::format!(
                "scene `{}` has no free cells",
                self.id
            )));
        }
        let start = (0..self.width)
            .flat_map(|x| (0..self.depth).map(move |z| Cell::new(x, z)))
            .find(|c| self.is_free(*c))
            .expect("free cell exists");
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![start];
        seen.insert(start);
        while let Some(cell) = stack.pop() {
            for (dx, dz) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let next = Cell::new(cell.x + dx, cell.z + dz);
                if self.is_free(next) && seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        if seen.len() != total_free {
            return Err(SimError::InvalidScene(alloc::format!(
                "scene `{}` free region is disconnected ({} of {} cells reachable)",
                self.id,
                seen.len(),
                total_free
            )));
        }
        Ok(())
    }
}

/// One visible object as the agent perceives it.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub class_name: String,
    /// Normalized image abscissa in [0, 1]; 0.5 is dead ahead.
    pub x_c: f64,
    /// Normalized image ordinate in [0, 1]; smaller is higher in the image.
    pub y_c: f64,
    /// Normalized box area in (0, 1].
    pub area: f64,
    /// Horizontal distance from the agent, meters.
    pub distance: f64,
}

/// Outcome of one simulator step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub detections: Vec<Detection>,
    pub reward: f64,
    pub done: bool,
    pub success: bool,
    pub steps_taken: u32,
}
