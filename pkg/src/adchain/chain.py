"""Discrete-time dynamics of a single repeater-chain trial.

The time step is the heralding time of elementary link generation.  Each
step has three phases:

  1. generation -- every segment not covered by an active link attempts
     to generate an elementary link with probability p_link,
  2. swapping -- the policy's eligible swaps run to a fixed point, always
     executing the leftmost eligible node first and re-scanning,
  3. the clock advances.

Swaps are deterministic and instantaneous, so a link generated in step t
is swappable in step t at age 0; aging happens only while a link waits
between creation and consumption.  Noise is applied lazily: a payload is
stored as of the link's creation instant and advanced by its age when the
link is consumed, which is exact because the noise rule is a semigroup.
A trial ends the moment a link spans the whole chain; the end-to-end
state is evaluated at its creation instant.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Union

from .bell_algebra import LinkState, NoiseParams, concurrence, fidelity, fresh_link, noise_update, swap_links
from .errors import ConfigurationError, InvalidParameterError, RunawayTrialError
from .twirled import TwirledLink, twirled_concurrence, twirled_fidelity

#: Hard cap on steps per trial; generation succeeds eventually for any
#: p_link > 0, so hitting this means a configuration bug.
MAX_TRIAL_STEPS = 10**7


class Policy(Enum):
    """When interior nodes execute their swap."""

    SWAP_AT_LAST = "swap-at-last"
    NESTING = "nesting"
    SWAP_ASAP = "swap-asap"


class Model(Enum):
    """Noise bookkeeping: exact four-parameter states or twirled ages."""

    AQN = "aqn"
    TAQN = "taqn"


@dataclass(frozen=True)
class ChainConfig:
    """Parameters of one homogeneous linear chain run."""

    num_nodes: int
    p_link: float
    noise: NoiseParams
    policy: Policy
    model: Model

    def __post_init__(self) -> None:
        if not (isinstance(self.num_nodes, int) and self.num_nodes >= 2):
            raise ConfigurationError(f"num_nodes must be an integer >= 2, got {self.num_nodes!r}")
        if not (0.0 < self.p_link <= 1.0):
            raise ConfigurationError(f"p_link must be in (0, 1], got {self.p_link!r}")
        if self.policy is Policy.NESTING:
            segments = self.num_nodes - 1
            if segments < 2 or segments & (segments - 1):
                raise ConfigurationError(
                    f"nesting needs 2**n + 1 nodes with n >= 1, got {self.num_nodes}"
                )


Payload = Union[LinkState, TwirledLink]


class ActiveLink(NamedTuple):
    """An entangled pair spanning [left, right], alive since created_at."""

    left: int
    right: int
    created_at: int
    payload: Payload


class TrialOutcome(NamedTuple):
    wait_steps: int
    final_fidelity: float
    final_concurrence: float
    swap_count: int


class ChainState:
    """Mutable state of one trial: active links plus bookkeeping.

    ``links`` is kept sorted by left node; active links never overlap in
    their interior, and a node appears in at most two of them, which rules
    out leapfrogged configurations structurally.
    """

    __slots__ = ("config", "links", "covered", "now", "swap_count", "end_link", "wait_steps")

    def __init__(self, config: ChainConfig):
        self.config = config
        self.links: list[ActiveLink] = []
        self.covered = [False] * (config.num_nodes - 1)
        self.now = 1  # steps are 1-based; wait_steps of an instant success is 1
        self.swap_count = 0
        self.end_link: ActiveLink | None = None
        self.wait_steps = 0

    @property
    def finished(self) -> bool:
        return self.end_link is not None


def eligible_swaps(chain: ChainState, policy: Policy | None = None) -> list[int]:
    """Nodes at which a swap must fire now, ordered left to right.

    swap-asap: any node shared by two adjacent links.  nesting: a node
    swaps at the level set by its index (required span = lowest set bit),
    and only once both its links have exactly that span.  swap-at-last:
    nothing until every segment is covered, then every junction.
    Cascading is achieved by re-evaluating after each executed swap.
    """
    if policy is None:
        policy = chain.config.policy
    links = chain.links
    if policy is Policy.SWAP_AT_LAST and not all(chain.covered):
        return []
    nodes = []
    for i in range(len(links) - 1):
        a, b = links[i], links[i + 1]
        node = a.right
        if node != b.left:
            continue
        if policy is Policy.NESTING:
            span = node & -node
            if a.right - a.left != span or b.right - b.left != span:
                continue
        nodes.append(node)
    return nodes


def execute_swap(chain: ChainState, node: int, now: int) -> ChainState:
    """Consume the two links meeting at ``node`` and splice in their swap.

    Each consumed payload is first advanced by its age (now - created_at);
    the new link starts at age 0 with the inherited noise already folded
    into its payload (exact states) or its accumulated age (twirled).
    """
    links = chain.links
    idx = next(
        (i for i in range(len(links) - 1) if links[i].right == node == links[i + 1].left),
        None,
    )
    if idx is None:
        raise InvalidParameterError(f"node {node} does not hold two adjacent links")
    left, right = links[idx], links[idx + 1]
    if chain.config.model is Model.AQN:
        noise = chain.config.noise
        aged_left = noise_update(left.payload, now - left.created_at, noise)
        aged_right = noise_update(right.payload, now - right.created_at, noise)
        payload: Payload = swap_links(aged_left, aged_right)
    else:
        payload = TwirledLink(
            left.payload.accumulated_age
            + (now - left.created_at)
            + right.payload.accumulated_age
            + (now - right.created_at)
        )
    links[idx : idx + 2] = [ActiveLink(left.left, right.right, now, payload)]
    chain.swap_count += 1
    return chain


def advance_step(chain: ChainState, rng) -> ChainState:
    """Run one time step: generation, swaps to fixed point, clock advance.

    Generation consumes one uniform draw per uncovered segment, in
    ascending segment order, so runs that share (seed, trial index) see
    identical generation streams regardless of policy or model.
    """
    config = chain.config
    now = chain.now
    p = config.p_link
    covered = chain.covered
    fresh: Payload = fresh_link() if config.model is Model.AQN else TwirledLink(0)
    created = False
    for seg in range(len(covered)):
        if not covered[seg] and rng.random() < p:
            covered[seg] = True
            chain.links.append(ActiveLink(seg, seg + 1, now, fresh))
            created = True
    if created:
        chain.links.sort(key=lambda link: link.left)
        # swap phase: leftmost eligible node first, re-scan after each swap
        while True:
            nodes = eligible_swaps(chain)
            if not nodes:
                break
            execute_swap(chain, nodes[0], now)
        links = chain.links
        if len(links) == 1 and links[0].left == 0 and links[0].right == config.num_nodes - 1:
            chain.end_link = links[0]
            chain.wait_steps = now
    chain.now = now + 1
    return chain


def run_trial(config: ChainConfig, rng) -> TrialOutcome:
    """One independent evolution from the empty chain to an end-to-end link."""
    chain = ChainState(config)
    while chain.end_link is None:
        if chain.now > MAX_TRIAL_STEPS:
            raise RunawayTrialError(
                f"no end-to-end link after {MAX_TRIAL_STEPS} steps (config: {config})"
            )
        advance_step(chain, rng)
    payload = chain.end_link.payload
    if config.model is Model.AQN:
        fid = fidelity(payload)
        conc = concurrence(payload)
    else:
        fid = twirled_fidelity(payload, config.noise)
        conc = twirled_concurrence(payload, config.noise)
    return TrialOutcome(chain.wait_steps, fid, conc, chain.swap_count)
