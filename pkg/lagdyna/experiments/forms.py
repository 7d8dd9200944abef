# -*- coding: utf-8 -*-
"""Forms validating the sections of an experiment configuration file.

Fields left out of a section are None in ``cleaned_data`` and take the library default.
"""
from django import forms

from lagdyna.nncore.network import ACTIVATIONS

#: Experiment variants, mapped to the loop mode and the model optimizer.
VARIANTS = {
    'lnn-adam': ('mbrl', 'adam'),
    'lnn-ekf': ('mbrl', 'ekf'),
    'mfrl': ('mfrl', 'adam'),
}


class IntegerListField(forms.CharField):
    """Comma separated non-negative integers, e.g. ``0,1,2`` or ``64, 64``."""

    def __init__(self, *args, **kwargs):
        self.min_items = kwargs.pop('min_items', 1)
        super().__init__(*args, **kwargs)

    def to_python(self, value):
        value = super().to_python(value)
        if value in self.empty_values:
            return None
        try:
            items = tuple(int(item) for item in value.replace(' ', '').split(',') if item)
        except ValueError:
            raise forms.ValidationError("Enter integers separated by commas.", code='invalid')
        if len(items) < self.min_items:
            raise forms.ValidationError("Enter at least %(count)d integer(s).", code='too_short',
                                        params={'count': self.min_items})
        if any(item < 0 for item in items):
            raise forms.ValidationError("Integers must not be negative.", code='negative')
        return items


def _choices(values):
    return [(value, value) for value in values]


class ExperimentForm(forms.Form):
    """The ``[experiment]`` section."""
    variant = forms.ChoiceField(choices=_choices(sorted(VARIANTS)))
    seeds = IntegerListField()
    output = forms.CharField(required=False)

    def clean_seeds(self):
        seeds = self.cleaned_data['seeds']
        if len(set(seeds)) != len(seeds):
            raise forms.ValidationError("Seeds must be distinct.", code='duplicate')
        return seeds


class DynaForm(forms.Form):
    """The ``[dyna]`` section: loop bounds, gates and evaluation cadence."""
    episodes = forms.IntegerField(min_value=1)
    steps_per_episode = forms.IntegerField(min_value=1, required=False)
    model_rounds = forms.IntegerField(min_value=1, required=False)
    rollout_batch = forms.IntegerField(min_value=1, required=False)
    rollout_horizon = forms.IntegerField(min_value=1, required=False)
    env_threshold = forms.IntegerField(min_value=0, required=False)
    model_threshold = forms.IntegerField(min_value=0, required=False)
    loss_threshold = forms.FloatField(min_value=0.0, required=False)
    model_every = forms.IntegerField(min_value=1, required=False)
    model_batch = forms.IntegerField(min_value=1, required=False)
    physical_loss = forms.NullBooleanField(required=False)
    physical_weight = forms.FloatField(min_value=0.0, required=False)
    physical_batch = forms.IntegerField(min_value=1, required=False)
    eval_every = forms.IntegerField(min_value=1, required=False)
    eval_episodes = forms.IntegerField(min_value=1, required=False)
    capacity = forms.IntegerField(min_value=1, required=False)


class PendulumForm(forms.Form):
    """The ``[pendulum]`` section, SI units."""
    mass = forms.FloatField(min_value=0.0, required=False)
    length = forms.FloatField(min_value=0.0, required=False)
    gravity = forms.FloatField(min_value=0.0, required=False)
    dt = forms.FloatField(min_value=0.0, required=False)
    torque_limit = forms.FloatField(min_value=0.0, required=False)
    speed_limit = forms.FloatField(min_value=0.0, required=False)
    horizon = forms.IntegerField(min_value=1, required=False)


class OptimizerForm(forms.Form):
    """The ``[optimizer]`` section. The optimizer itself follows from the variant."""
    learning_rate = forms.FloatField(min_value=0.0, required=False)
    beta1 = forms.FloatField(min_value=0.0, max_value=1.0, required=False)
    beta2 = forms.FloatField(min_value=0.0, max_value=1.0, required=False)
    eps = forms.FloatField(min_value=0.0, required=False)
    batch_size = forms.IntegerField(min_value=1, required=False)
    epochs = forms.IntegerField(min_value=1, required=False)
    initial_cov = forms.FloatField(min_value=0.0, required=False)
    process_noise = forms.FloatField(min_value=0.0, required=False)
    meas_noise = forms.FloatField(min_value=0.0, required=False)
    passes = forms.IntegerField(min_value=1, required=False)


class AgentForm(forms.Form):
    """The ``[agent]`` section."""
    hidden = IntegerListField(required=False)
    activation = forms.ChoiceField(choices=_choices(sorted(ACTIVATIONS)), required=False)
    actor_lr = forms.FloatField(min_value=0.0, required=False)
    critic_lr = forms.FloatField(min_value=0.0, required=False)
    gamma = forms.FloatField(min_value=0.0, required=False)
    target_every = forms.IntegerField(min_value=1, required=False)
    initial_log_std = forms.FloatField(required=False)
    value_scale = forms.FloatField(min_value=0.0, required=False)
    output_gain = forms.FloatField(min_value=0.0, required=False)
    baseline = forms.NullBooleanField(required=False)
    updates_per_episode = forms.IntegerField(min_value=0, required=False)
    batch_size = forms.IntegerField(min_value=1, required=False)

    def clean_gamma(self):
        gamma = self.cleaned_data.get('gamma')
        if gamma is not None and gamma >= 1.0:
            raise forms.ValidationError("The discount must be less than 1.")
        return gamma


class LNNForm(forms.Form):
    """The ``[lnn]`` section: architecture of the Lagrangian network."""
    hidden = IntegerListField(required=False)
    activation = forms.ChoiceField(choices=_choices(['softplus', 'tanh']), required=False)


#: Config file sections in the order they are resolved and dumped.
SECTION_FORMS = {
    'experiment': ExperimentForm,
    'dyna': DynaForm,
    'pendulum': PendulumForm,
    'optimizer': OptimizerForm,
    'agent': AgentForm,
    'lnn': LNNForm,
}
