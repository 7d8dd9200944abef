# -*- coding: utf-8 -*-
"""Experiment configuration files.

A configuration is an INI file with the sections of ``SECTION_FORMS``. Every problem is
reported as a ConfigError carrying the file, the line and the offending field.
"""
import configparser
import os
import re
from dataclasses import asdict, dataclass, field, fields, replace

from django.conf import settings

from lagdyna.agent.config import AgentConfig
from lagdyna.dyna.loop import DynaConfig
from lagdyna.envs.pendulum import PendulumParams
from lagdyna.exceptions import ConfigError, LagdynaError
from lagdyna.experiments.forms import SECTION_FORMS, VARIANTS
from lagdyna.nncore.network import NetworkArch
from lagdyna.optim.trainers import OptimizerConfig
from lagdyna.tools import git_blob_hash

SECTION_RE = re.compile(r'^\s*\[(?P<name>[^\]]+)\]')
OPTION_RE = re.compile(r'^(?P<key>[^\s=:#;][^=:]*?)\s*[=:]')


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment: one variant, the seeds to run it with and the shared run settings.

    ``dyna`` carries every component configuration. Its seed, mode and optimizer name are
    filled in per run by ``for_seed``.
    """
    variant: str
    seeds: tuple
    output: str
    dyna: DynaConfig = field(default_factory=DynaConfig)
    path: str = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError("unknown variant %r, expected one of %s" % (self.variant, sorted(VARIANTS)),
                              self.path, field='variant')
        if not self.seeds:
            raise ConfigError("at least one seed is needed", self.path, field='seeds')

    def for_seed(self, seed):
        mode, optimizer = VARIANTS[self.variant]
        return replace(self.dyna, seed=seed, mode=mode, optimizer=replace(self.dyna.optimizer, name=optimizer))

    def with_overrides(self, variant=None, seeds=None, output=None):
        return replace(self, variant=variant or self.variant, seeds=tuple(seeds) if seeds else self.seeds,
                       output=output or self.output)

    @property
    def variant_directory(self):
        return os.path.join(self.output, self.variant)

    def resolved_items(self):
        """Every setting a run depends on, as sorted-within-section (key, value) pairs."""
        run = self.for_seed(self.seeds[0])
        items = [('experiment.variant', self.variant),
                 ('experiment.seeds', ','.join(str(seed) for seed in self.seeds))]
        nested = {'pendulum': run.pendulum, 'agent': run.agent, 'optimizer': run.optimizer}
        for f in fields(run):
            if f.name not in nested and f.name != 'seed':
                items.append(('dyna.%s' % f.name, _format_value(getattr(run, f.name))))
        for section, config in nested.items():
            items.extend(('%s.%s' % (section, key), _format_value(value)) for key, value in asdict(config).items())
        return items

    @property
    def config_hash(self):
        """Git blob hash of the resolved settings, output directory and seed list left out."""
        return git_blob_hash(''.join('%s=%s\n' % item for item in self.resolved_items()
                                     if item[0] != 'experiment.seeds'))


def _format_value(value):
    if isinstance(value, (tuple, list)):
        return ','.join(str(item) for item in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _line_numbers(text):
    """Map section names and (section, key) pairs to their 1-based line numbers."""
    lines = {}
    section = None
    for number, line in enumerate(text.splitlines(), 1):
        match = SECTION_RE.match(line)
        if match:
            section = match.group('name').strip()
            lines.setdefault(section, number)
            continue
        match = OPTION_RE.match(line)
        if match and section is not None:
            lines.setdefault((section, match.group('key').strip().lower()), number)
    return lines


def _clean_section(name, form_class, options, path, lines):
    form = form_class(data=dict(options))
    unknown = sorted(set(options) - set(form.fields))
    if unknown:
        key = unknown[0]
        raise ConfigError("[%s] %s: unknown key" % (name, key), path, lines.get((name, key), lines.get(name)), key)
    if not form.is_valid():
        key, messages = sorted(form.errors.items())[0]
        line = lines.get((name, key), lines.get(name, 0))
        raise ConfigError("[%s] %s: %s" % (name, key, ' '.join(messages)), path, line, key)
    return {key: value for key, value in form.cleaned_data.items() if value not in (None, '')}


def parse_config(text, path='<config>'):
    """Parse and validate the text of a configuration file. Returns an ExperimentConfig."""
    parser = configparser.ConfigParser(interpolation=None, default_section='__defaults__')
    try:
        parser.read_string(text, source=path)
    except configparser.Error as err:
        line = getattr(err, 'lineno', None)
        if line is None and getattr(err, 'errors', None):
            line = err.errors[0][0]
        raise ConfigError("malformed configuration: %s" % err.message.splitlines()[0], path, line)
    lines = _line_numbers(text)
    for name in parser.sections():
        if name not in SECTION_FORMS:
            raise ConfigError("[%s] unknown section" % name, path, lines.get(name))
    for name in ('experiment', 'dyna'):
        if not parser.has_section(name):
            raise ConfigError("[%s] section is missing" % name, path, 0)
    cleaned = {}
    for name, form_class in SECTION_FORMS.items():
        options = dict(parser.items(name)) if parser.has_section(name) else {}
        cleaned[name] = _clean_section(name, form_class, options, path, lines)
    return _build(cleaned, path, lines)


def _build(cleaned, path, lines):
    experiment = cleaned['experiment']
    dyna = dict(cleaned['dyna'])
    lnn = cleaned['lnn']
    try:
        section = 'pendulum'
        dyna['pendulum'] = PendulumParams(**cleaned['pendulum'])
        section = 'agent'
        dyna['agent'] = AgentConfig(**cleaned['agent'])
        NetworkArch((2,) + tuple(dyna['agent'].hidden) + (1,), dyna['agent'].activation)
        section = 'optimizer'
        dyna['optimizer'] = OptimizerConfig(**cleaned['optimizer'])
        section = 'lnn'
        dyna['lnn_hidden'] = lnn.get('hidden', DynaConfig.lnn_hidden)
        dyna['lnn_activation'] = lnn.get('activation', DynaConfig.lnn_activation)
        NetworkArch((2,) + tuple(dyna['lnn_hidden']) + (1,), dyna['lnn_activation'])
        section = 'dyna'
        dyna_config = DynaConfig(**dyna)
    except LagdynaError as err:
        raise ConfigError("[%s] %s" % (section, err), path, lines.get(section, 0))
    output = experiment.get('output') or settings.LAGDYNA_OUTPUT_ROOT
    return ExperimentConfig(experiment['variant'], experiment['seeds'], output, dyna_config, path)


def load_config(path):
    """Read and validate a configuration file. The file is only read."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as err:
        raise ConfigError("cannot read configuration: %s" % err.strerror, path, 0)
    return parse_config(text, path)
