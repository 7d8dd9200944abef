# -*- coding: utf-8 -*-
"""LNN1 weight checkpoints.

Layout, all little-endian: the magic ``b"LNN1"``; uint32 number of layer widths; the widths as
uint32; uint8 activation code; uint16 length of the role tag and the UTF-8 role tag; uint64
number of weights; the weights as float64 in the flat order of ScalarNetwork.
"""
import struct

import numpy as np

from lagdyna.exceptions import CheckpointError
from lagdyna.nncore.network import NetworkArch, ScalarNetwork

MAGIC = b'LNN1'
ACTIVATION_CODES = {'softplus': 0, 'tanh': 1, 'identity': 2}


def dumps(net, role=''):
    """Serialize a network into LNN1 bytes."""
    widths = net.arch.layer_widths
    role_bytes = role.encode('utf-8')
    header = b''.join([
        MAGIC,
        struct.pack('<I', len(widths)),
        struct.pack('<%dI' % len(widths), *widths),
        struct.pack('<BH', ACTIVATION_CODES[net.arch.activation], len(role_bytes)),
        role_bytes,
        struct.pack('<Q', net.weights.size),
    ])
    return header + np.asarray(net.weights, dtype='<f8').tobytes()


def loads(data):
    """Parse LNN1 bytes. Returns (ScalarNetwork, role tag)."""
    if data[:4] != MAGIC:
        raise CheckpointError("not an LNN1 checkpoint (magic %r)" % data[:4])
    try:
        offset = 4
        (count,) = struct.unpack_from('<I', data, offset)
        offset += 4
        widths = struct.unpack_from('<%dI' % count, data, offset)
        offset += 4 * count
        code, role_length = struct.unpack_from('<BH', data, offset)
        offset += 3
        role = data[offset:offset + role_length].decode('utf-8')
        offset += role_length
        (size,) = struct.unpack_from('<Q', data, offset)
        offset += 8
    except struct.error as err:
        raise CheckpointError("truncated checkpoint header: %s" % err)
    activations = {v: k for k, v in ACTIVATION_CODES.items()}
    if code not in activations:
        raise CheckpointError("unknown activation code %d" % code)
    body = data[offset:]
    if len(body) != 8 * size:
        raise CheckpointError("checkpoint declares %d weights but holds %d bytes" % (size, len(body)))
    weights = np.frombuffer(body, dtype='<f8').astype(float)
    return ScalarNetwork(NetworkArch(widths, activations[code]), weights), role


def save_checkpoint(path, net, role=''):
    with open(path, 'wb') as fh:
        fh.write(dumps(net, role))
    return path


def load_checkpoint(path):
    with open(path, 'rb') as fh:
        return loads(fh.read())
