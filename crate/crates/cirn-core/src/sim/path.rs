//! Shortest-path oracle for SPL: breadth-first search over the pose graph
//! `(cell, heading, pitch)` with the five movement actions as unit edges
//! and `Done` as the final action at any goal pose.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use super::vision::pose_is_goal;
use super::{AgentPose, Cell, Scene};

fn state_index(scene: &Scene, pose: &AgentPose) -> usize {
    let cell = (pose.cell.x as usize) * (scene.depth as usize) + pose.cell.z as usize;
    (cell * 4 + pose.heading.index()) * 3 + pose.pitch.index()
}

/// Poses reachable in one action, excluding no-ops (blocked MoveAhead,
/// pitch already at its limit).
fn neighbors(scene: &Scene, pose: &AgentPose) -> Vec<AgentPose> {
    let mut out = Vec::with_capacity(5);
    let (dx, dz) = pose.heading.forward();
    let ahead = Cell::new(pose.cell.x + dx, pose.cell.z + dz);
    if scene.is_free(ahead) {
        out.push(AgentPose::new(ahead, pose.heading, pose.pitch));
    }
    out.push(AgentPose::new(pose.cell, pose.heading.left(), pose.pitch));
    out.push(AgentPose::new(pose.cell, pose.heading.right(), pose.pitch));
    if pose.pitch.up() != pose.pitch {
        out.push(AgentPose::new(pose.cell, pose.heading, pose.pitch.up()));
    }
    if pose.pitch.down() != pose.pitch {
        out.push(AgentPose::new(pose.cell, pose.heading, pose.pitch.down()));
    }
    out
}

/// Minimum number of actions (Done included) to finish successfully from
/// `start`, or `None` when no goal pose is reachable (for instance when
/// the target class is absent from the scene).
pub fn shortest_path_length(scene: &Scene, start: &AgentPose, target: &str) -> Option<u32> {
    if !scene.is_free(start.cell) {
        return None;
    }
    let states = (scene.width as usize) * (scene.depth as usize) * 4 * 3;
    let mut visited = alloc::vec![false; states];
    let mut queue = VecDeque::new();
    visited[state_index(scene, start)] = true;
    queue.push_back((*start, 0u32));
    while let Some((pose, dist)) = queue.pop_front() {
        if pose_is_goal(scene, &pose, target) {
            return Some(dist + 1);
        }
        for next in neighbors(scene, &pose) {
            let idx = state_index(scene, &next);
            if !visited[idx] {
                visited[idx] = true;
                queue.push_back((next, dist + 1));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{Heading, Pitch, SceneObject, SceneType};
    use alloc::string::String;

    fn scene(objects: Vec<(&str, i32, i32)>, walls: &[(i32, i32)]) -> Scene {
        Scene {
            id: String::from("t"),
            scene_type: SceneType::Kitchen,
            width: 8,
            depth: 8,
            walls: walls.iter().map(|&(x, z)| Cell::new(x, z)).collect(),
            objects: objects
                .into_iter()
                .map(|(class, x, z)| SceneObject {
                    class_name: class.into(),
                    cell: Cell::new(x, z),
                    height: 1.0,
                    size: 0.5,
                })
                .collect(),
            start_poses: alloc::vec![],
        }
    }

    fn pose(x: i32, z: i32, heading: Heading) -> AgentPose {
        AgentPose::new(Cell::new(x, z), heading, Pitch::Level)
    }

    #[test]
    fn start_at_goal_costs_one_action() {
        let s = scene(alloc::vec![("sink", 2, 4)], &[]);
        assert_eq!(
            shortest_path_length(&s, &pose(2, 2, Heading::North), "sink"),
            Some(1)
        );
    }

    #[test]
    fn absent_target_is_unreachable() {
        let s = scene(alloc::vec![("sink", 2, 4)], &[]);
        assert_eq!(shortest_path_length(&s, &pose(2, 2, Heading::North), "mug"), None);
    }

    #[test]
    fn rotation_then_done_costs_two() {
        // target 2 cells east; one RotateRight then Done
        let s = scene(alloc::vec![("sink", 4, 2)], &[]);
        assert_eq!(
            shortest_path_length(&s, &pose(2, 2, Heading::North), "sink"),
            Some(2)
        );
    }

    #[test]
    fn bfs_routes_around_walls() {
        // corridor forces a detour before the target is visible in range
        let s = scene(
            alloc::vec![("sink", 0, 7)],
            &[(0, 4), (1, 4), (2, 4), (3, 4), (4, 4), (5, 4), (6, 4)],
        );
        let direct = scene(alloc::vec![("sink", 0, 7)], &[]);
        let with_wall = shortest_path_length(&s, &pose(0, 0, Heading::North), "sink").unwrap();
        let without = shortest_path_length(&direct, &pose(0, 0, Heading::North), "sink").unwrap();
        assert!(with_wall > without, "{with_wall} vs {without}");
    }

    #[test]
    fn bfs_lower_bounds_random_successful_rollouts() {
        use crate::embed::EmbeddingTable;
        use crate::sim::{Action, Simulator};
        use alloc::sync::Arc;
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;

        let table = EmbeddingTable::parse("sink 1 0\nmug 0 1\n").unwrap();
        let s = Arc::new(scene(alloc::vec![("sink", 6, 6), ("mug", 1, 5)], &[(4, 4)]));
        let sims = Arc::new(table.similarities_to("sink", s.classes()).unwrap());
        let start = pose(1, 1, Heading::North);
        let optimal = shortest_path_length(&s, &start, "sink").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut successes = 0;
        for _ in 0..400 {
            let (mut env, _) = Simulator::reset(s.clone(), start, sims.clone(), 100).unwrap();
            loop {
                let action = Action::from_index(rng.gen_range(0..6)).unwrap();
                let result = env.step(action).unwrap();
                if result.done {
                    if result.success {
                        successes += 1;
                        assert!(
                            result.steps_taken >= optimal,
                            "rollout beat the oracle: {} < {optimal}",
                            result.steps_taken
                        );
                    }
                    break;
                }
            }
        }
        assert!(successes > 0, "random walk never succeeded; weak test");
    }
}
