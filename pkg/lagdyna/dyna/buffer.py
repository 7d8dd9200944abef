# -*- coding: utf-8 -*-
"""Ring replay buffers for real and model-generated transitions."""
from dataclasses import dataclass

import numpy as np

from lagdyna.envs.pendulum import Transition
from lagdyna.exceptions import InputShapeError, PreconditionError, ProvenanceError
from lagdyna.state import Force, GeneralizedState

#: Provenance tags, environment transitions and model rollouts.
PROVENANCES = ('env', 'model')


@dataclass(frozen=True)
class TransitionBatch(Transition):
    """A batched Transition that knows its length, as the critic and the model trainer expect."""

    def __len__(self):
        return self.s.q.shape[0]

    def subset(self, index):
        return TransitionBatch(GeneralizedState(self.s.q[index], self.s.qdot[index]), Force(self.a.a[index]),
                               GeneralizedState(self.s_next.q[index], self.s_next.qdot[index]),
                               np.asarray(self.r)[index], np.asarray(self.done)[index])

    @classmethod
    def concatenate(cls, batches):
        batches = [batch for batch in batches if len(batch)]
        if not batches:
            raise PreconditionError("nothing to concatenate")
        return cls(
            GeneralizedState(np.concatenate([b.s.q for b in batches]), np.concatenate([b.s.qdot for b in batches])),
            Force(np.concatenate([b.a.a for b in batches])),
            GeneralizedState(np.concatenate([b.s_next.q for b in batches]),
                             np.concatenate([b.s_next.qdot for b in batches])),
            np.concatenate([b.r for b in batches]),
            np.concatenate([b.done for b in batches]),
        )


class ReplayBuffer(object):
    """Fixed-capacity store of transitions of one provenance.

    Once full, every new transition overwrites the oldest one. Sampling is uniform over the
    current contents and driven by the buffer's own seeded generator.
    """

    def __init__(self, capacity, provenance, dof=1, seed=0):
        if capacity < 1:
            raise PreconditionError("buffer capacity must be positive, got %d" % capacity)
        if provenance not in PROVENANCES:
            raise PreconditionError("unknown provenance %r, expected one of %s" % (provenance, PROVENANCES))
        self.capacity = capacity
        self.provenance = provenance
        self.dof = dof
        self.rng = np.random.default_rng(seed)
        self.q = np.zeros((capacity, dof))
        self.qdot = np.zeros((capacity, dof))
        self.a = np.zeros((capacity, dof))
        self.q_next = np.zeros((capacity, dof))
        self.qdot_next = np.zeros((capacity, dof))
        self.r = np.zeros(capacity)
        self.done = np.zeros(capacity, dtype=bool)
        self.size = 0
        self.position = 0
        self.added = 0

    def __len__(self):
        return self.size

    def __repr__(self):
        return "<ReplayBuffer %s %d/%d>" % (self.provenance, self.size, self.capacity)

    def add(self, transition, provenance):
        """Store a single or a batched Transition tagged with ``provenance``. Returns the count stored."""
        if provenance != self.provenance:
            raise ProvenanceError("%s transitions cannot go into the %s buffer" % (provenance, self.provenance))
        columns = [np.atleast_2d(transition.s.q), np.atleast_2d(transition.s.qdot), np.atleast_2d(transition.a.a),
                   np.atleast_2d(transition.s_next.q), np.atleast_2d(transition.s_next.qdot)]
        count = columns[0].shape[0]
        if any(column.shape != (count, self.dof) for column in columns):
            raise InputShapeError("transition arrays %s do not match %d rows of %d coordinates"
                                  % ([c.shape for c in columns], count, self.dof))
        r = np.broadcast_to(np.asarray(transition.r, dtype=float), (count,))
        done = np.broadcast_to(np.asarray(transition.done, dtype=bool), (count,))
        index = (self.position + np.arange(count)) % self.capacity
        for store, column in zip((self.q, self.qdot, self.a, self.q_next, self.qdot_next), columns):
            store[index] = column
        self.r[index] = r
        self.done[index] = done
        self.position = (self.position + count) % self.capacity
        self.size = min(self.size + count, self.capacity)
        self.added += count
        return count

    def batch(self, index):
        return TransitionBatch(GeneralizedState(self.q[index], self.qdot[index]), Force(self.a[index]),
                               GeneralizedState(self.q_next[index], self.qdot_next[index]),
                               self.r[index].copy(), self.done[index].copy())

    def sample(self, count, replace=True):
        """Uniform sample of ``count`` transitions, without replacement capped at the buffer size."""
        if self.size == 0:
            raise PreconditionError("cannot sample from an empty %s buffer" % self.provenance)
        if replace:
            index = self.rng.integers(0, self.size, size=count)
        else:
            index = self.rng.choice(self.size, size=min(count, self.size), replace=False)
        return self.batch(index)

    def contents(self):
        """Every stored transition, oldest first."""
        start = self.position if self.size == self.capacity else 0
        return self.batch((start + np.arange(self.size)) % self.capacity)


def sample_union(env_buffer, model_buffer, count):
    """Sample from both buffers one to one, or only real transitions while the model buffer is empty."""
    if model_buffer is None or len(model_buffer) == 0:
        return env_buffer.sample(count)
    from_model = count // 2
    return TransitionBatch.concatenate([env_buffer.sample(count - from_model), model_buffer.sample(from_model)])
