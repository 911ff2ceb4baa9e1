//! Episode state machine: pose kinematics, reward, and termination.

use alloc::sync::Arc;
use alloc::vec::Vec;

use super::vision::{pose_is_goal, visible_objects};
use super::{Action, AgentPose, Detection, Scene, SimError, StepResult};
use crate::embed::TargetSimilarities;

/// One episode of one scene. Owns its episode state; scene data and the
/// similarity table are shared read-only.
///
/// Reward per step, mutually exclusive cases:
/// * `+5` when this step completes a successful episode,
/// * `-0.01` on an unsuccessful `Done`,
/// * `0.01 * max_i s_i` over visible objects otherwise,
/// * `-0.01` when nothing is visible.
#[derive(Debug, Clone)]
pub struct Simulator {
    scene: Arc<Scene>,
    sims: Arc<TargetSimilarities>,
    max_steps: u32,
    pose: AgentPose,
    steps: u32,
    done: bool,
    success: bool,
}

impl Simulator {
    /// Start an episode. Returns the simulator and the detections at the
    /// start pose. The target is `sims.target()`; it need not exist in the
    /// scene (such episodes are legal and unwinnable).
    pub fn reset(
        scene: Arc<Scene>,
        start: AgentPose,
        sims: Arc<TargetSimilarities>,
        max_steps: u32,
    ) -> Result<(Self, Vec<Detection>), SimError> {
        if !scene.is_free(start.cell) {
            return Err(SimError::InvalidPose(alloc::format!(
                "start cell ({}, {}) is out of bounds or a wall",
                start.cell.x,
                start.cell.z
            )));
        }
        for obj in &scene.objects {
            if sims.get(&obj.class_name).is_none() {
                return Err(SimError::MissingSimilarity(obj.class_name.clone()));
            }
        }
        let sim = Self {
            scene,
            sims,
            max_steps,
            pose: start,
            steps: 0,
            done: false,
            success: false,
        };
        let detections = visible_objects(&sim.scene, &sim.pose);
        Ok((sim, detections))
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    pub fn target(&self) -> &str {
        self.sims.target()
    }

    pub fn similarities(&self) -> &TargetSimilarities {
        &self.sims
    }

    pub fn pose(&self) -> AgentPose {
        self.pose
    }

    pub fn steps_taken(&self) -> u32 {
        self.steps
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn succeeded(&self) -> bool {
        self.success
    }

    pub fn step(&mut self, action: Action) -> Result<StepResult, SimError> {
        if self.done {
            return Err(SimError::EpisodeOver);
        }
        self.steps += 1;
        match action {
            Action::MoveAhead => {
                let (dx, dz) = self.pose.heading.forward();
                let next = super::Cell::new(self.pose.cell.x + dx, self.pose.cell.z + dz);
                if self.scene.is_free(next) {
                    self.pose.cell = next;
                }
            }
            Action::RotateLeft => self.pose.heading = self.pose.heading.left(),
            Action::RotateRight => self.pose.heading = self.pose.heading.right(),
            Action::LookUp => self.pose.pitch = self.pose.pitch.up(),
            Action::LookDown => self.pose.pitch = self.pose.pitch.down(),
            Action::Done => {}
        }
        let detections = visible_objects(&self.scene, &self.pose);
        let success =
            action == Action::Done && pose_is_goal(&self.scene, &self.pose, self.sims.target());
        let done = action == Action::Done || self.steps >= self.max_steps;
        let reward = if success {
            5.0
        } else if action == Action::Done {
            -0.01
        } else {
            let best = detections
                .iter()
                .map(|d| self.sims.get(&d.class_name).expect("checked at reset"))
                .fold(f64::NEG_INFINITY, f64::max);
            if best.is_finite() {
                0.01 * best
            } else {
                -0.01
            }
        };
        self.done = done;
        self.success = success;
        Ok(StepResult {
            detections,
            reward,
            done,
            success,
            steps_taken: self.steps,
        })
    }
}
