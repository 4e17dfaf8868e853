# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
json schemas for models and results
"""

import json

from marshmallow import fields, post_dump, post_load, Schema, validate, ValidationError

from gwk.covariance import build_model, Family, GWParams, MaternParams, TaperedMaternParams
from gwk.lib import ConfigError, load_json


class BaseSchema(Schema):
    """base gwk schema"""

    @post_dump
    def remove_none(self, data, **kwargs):  # pylint: disable=unused-argument
        """Remove None fields"""

        return {key: value for key, value in data.items() if value is not None}


class GWParamsSchema(BaseSchema):
    """generalized wendland parameters"""

    mu = fields.Float(required=True)
    kappa = fields.Float(required=True)
    beta = fields.Float(required=True)
    sigma2 = fields.Float(load_default=1.0)


class AskeyParamsSchema(BaseSchema):
    """askey parameters, kappa is implied"""

    mu = fields.Float(required=True)
    beta = fields.Float(required=True)
    sigma2 = fields.Float(load_default=1.0)


class MaternParamsSchema(BaseSchema):
    """matern parameters"""

    nu = fields.Float(required=True)
    alpha = fields.Float(required=True)
    sigma2 = fields.Float(load_default=1.0)


class TaperedMaternParamsSchema(BaseSchema):
    """matern parameters with a GW taper"""

    matern = fields.Nested(MaternParamsSchema, required=True)
    taper = fields.Nested(GWParamsSchema, required=True)


PARAMS_SCHEMAS = {
    Family.GW: GWParamsSchema,
    Family.ASKEY: AskeyParamsSchema,
    Family.MATERN: MaternParamsSchema,
    Family.TAPERED_MATERN: TaperedMaternParamsSchema,
}


class ModelSchema(BaseSchema):
    """covariance model {"family": ..., "params": {...}, "dim": d}, loads into a validated model"""

    family = fields.String(required=True, validate=validate.OneOf([item.value for item in Family]))
    params = fields.Dict(required=True)
    dim = fields.Integer(load_default=2)

    @post_load
    def make_model(self, data, **kwargs):  # pylint: disable=unused-argument
        """build model instance"""

        family = Family(data['family'])
        params = PARAMS_SCHEMAS[family]().load(data['params'])
        dim = data['dim']
        if family == Family.TAPERED_MATERN:
            params = TaperedMaternParams(
                matern=MaternParams(**params['matern'], d=dim),
                taper=GWParams(**params['taper'], d=dim),
            )
        elif family == Family.MATERN:
            params = MaternParams(**params, d=dim)
        else:
            params = GWParams(**{'kappa': 0.0, **params}, d=dim)
        return build_model(params, family)


class FitResultSchema(BaseSchema):
    """profile likelihood fit"""

    sigma2_hat = fields.Float()
    beta_hat = fields.Float()
    microergodic_hat = fields.Float()
    loglik = fields.Float()
    evaluations = fields.Integer()
    interval = fields.List(fields.Float())


class PredictionResultSchema(BaseSchema):
    """kriging prediction"""

    predicted = fields.Float(allow_none=True)
    weights = fields.Method('dump_weights')
    mse_true_model = fields.Float()
    mse_assumed_model = fields.Float()

    def dump_weights(self, obj):
        """numpy weights as list"""
        return [float(item) for item in obj.weights]


class CompatibilityReportSchema(BaseSchema):
    """equivalence check outcome"""

    equivalent = fields.Boolean()
    condition_checked = fields.String()
    mu_bound_ok = fields.Boolean()
    smoothness_match_ok = fields.Boolean()
    constant = fields.Float(allow_none=True)


def load_model(value):
    """model from inline json or json file"""

    try:
        return ModelSchema().load(load_json(value))
    except ValidationError as exc:
        raise ConfigError(f'invalid model, {exc.messages}') from None


def dump_model(model):
    """model json string"""
    return json.dumps(model.to_dict())
