"""Generate reference CartPole-v0 trajectories with gymnasium.

Each trajectory starts from a state drawn with Python's own RNG and applies
100 random actions through the stock gymnasium environment, ignoring
termination so the raw integrator is exercised for the full horizon.

    python3 gen_cartpole_reference.py > cartpole_reference.json
"""
import json
import random
import warnings

import gymnasium as gym
import numpy as np

warnings.filterwarnings("ignore")

TRAJECTORIES = 50
STEPS = 100


def main():
    env = gym.make("CartPole-v0").unwrapped
    env.reset(seed=0)
    out = []
    for seed in range(TRAJECTORIES):
        rng = random.Random(seed)
        init = [rng.uniform(-0.05, 0.05) for _ in range(4)]
        actions = [rng.randrange(2) for _ in range(STEPS)]
        env.state = np.array(init, dtype=np.float64)
        env.steps_beyond_terminated = None
        states = []
        for a in actions:
            obs, _, _, _, _ = env.step(a)
            states.append([float(v) for v in env.state])
        out.append({"seed": seed, "initial": init, "actions": actions, "states": states})
    print(json.dumps({"generator": "gymnasium " + gym.__version__ + " CartPole-v0", "trajectories": out}))


if __name__ == "__main__":
    main()
