from fractions import Fraction
from typing import Any, Dict, List, Optional

from rest_framework import serializers

from .core import Iv, format_rat, parse_rat
from .exceptions import DomainError
from .funcs import FnSpec, certificates

COMMANDS: List[str] = [
    'integrate', 'partition', 'variation', 'cov', 'ftc', 'scan', 'counterexample', 'catalog'
]

#Commands whose partitions are drawn at random
RANDOMIZED: List[str] = ['integrate', 'variation', 'cov', 'ftc', 'scan', 'counterexample']

FN_COMMANDS: List[str] = ['integrate', 'partition', 'variation', 'ftc']
INSTANCE_COMMANDS: List[str] = ['cov', 'scan']


class RatField(serializers.Field):

    """
        Exact rational carried as a "num/den" string

        ``allow_decimal`` admits decimal and exponent notation, which is
        only accepted for ε schedules and tolerances.
    """

    default_error_messages: Dict[str, str] = {
        'invalid': 'A rational number written as "num/den" is required.',
        'decimal': 'Decimal notation is not accepted here; write "num/den".',
    }

    def __init__(self, allow_decimal: bool = False, **kwargs: Any) -> None:
        self.allow_decimal: bool = allow_decimal
        super().__init__(**kwargs)

    def to_internal_value(self, data: Any) -> Fraction:
        if isinstance(data, Fraction):
            return data
        text: str = str(data).strip()
        if not self.allow_decimal and any(mark in text.lower() for mark in ('.', 'e')):
            self.fail('decimal')
        try:
            return parse_rat(text)
        except DomainError:
            self.fail('invalid')

    def to_representation(self, value: Fraction) -> str:
        return format_rat(parse_rat(value))


class IvSerializer(serializers.Serializer):
    lo = RatField()
    hi = RatField()

    def validate(self, attrs: Dict[str, Any]) -> Iv:

        """
            This method validate the interval endpoints

            :param attrs: Endpoints of the interval
            :type attrs: dict

            :return: The interval
            :rtype: Iv
        """

        if attrs['lo'] > attrs['hi']:
            raise serializers.ValidationError("The left endpoint is greater than the right endpoint")
        return Iv(attrs['lo'], attrs['hi'])


class ValueWithErrorSerializer(serializers.Serializer):
    value = RatField()
    error = RatField()
    exact = serializers.BooleanField(read_only=True)
    convention = serializers.BooleanField(read_only=True)
    approx = serializers.SerializerMethodField()

    def get_approx(self, obj: Any) -> float:
        return float(obj.value)


class TaggedCellSerializer(serializers.Serializer):
    tag = RatField()
    cell = IvSerializer()


class PartitionSummarySerializer(serializers.Serializer):

    """
        Cell count and mesh; the cells themselves go to the CSV dump
    """

    domain = IvSerializer()
    cells = serializers.SerializerMethodField()
    mesh = RatField()

    def get_cells(self, obj: Any) -> int:
        return len(obj.items)


class HKRowSerializer(serializers.Serializer):
    eps = RatField()
    gauge = serializers.CharField()
    sums = ValueWithErrorSerializer(many=True)
    lower = RatField()
    upper = RatField()
    spread = RatField()


class HKReportSerializer(serializers.Serializer):
    function = serializers.CharField()
    a = RatField()
    b = RatField()
    orientation = serializers.IntegerField()
    tolerance = RatField()
    converged = serializers.BooleanField()
    estimate = ValueWithErrorSerializer(allow_null=True)
    rows = HKRowSerializer(many=True)


class VariationSumsSerializer(serializers.Serializer):
    abs_sum = ValueWithErrorSerializer()
    signed_abs = ValueWithErrorSerializer()


class WitnessSerializer(serializers.Serializer):
    eps = RatField()
    gauge = serializers.CharField()
    sums = VariationSumsSerializer()
    partition = PartitionSummarySerializer()


class VariationRowSerializer(serializers.Serializer):
    eps = RatField()
    gauge = serializers.CharField()
    tried = serializers.IntegerField()
    max_abs = RatField()
    max_signed = RatField()
    nv_pass = serializers.BooleanField()
    ncv_pass = serializers.BooleanField()


class VariationReportSerializer(serializers.Serializer):
    function = serializers.CharField()
    tagged_in = serializers.CharField()
    domain = IvSerializer()
    criterion = serializers.CharField(source='criterion.value')
    verdict = serializers.CharField(source='verdict.value')
    rows = VariationRowSerializer(many=True)
    witness = WitnessSerializer(allow_null=True)


class AdversarialResultSerializer(serializers.Serializer):
    strategy = serializers.CharField()
    gauge = serializers.CharField()
    sums = VariationSumsSerializer()
    partition = PartitionSummarySerializer()


class CovRowSerializer(serializers.Serializer):
    eps = RatField()
    sums = ValueWithErrorSerializer(many=True)
    discrepancy = RatField()
    passed = serializers.BooleanField()


class CovReportSerializer(serializers.Serializer):
    instance = serializers.CharField()
    interval = IvSerializer()
    lhs = ValueWithErrorSerializer()
    rows = CovRowSerializer(many=True)
    verdict = serializers.CharField()
    holds = serializers.BooleanField()
    expected = serializers.BooleanField(allow_null=True)
    matches_expectation = serializers.BooleanField(allow_null=True)
    consistent = serializers.BooleanField()
    ncv = VariationReportSerializer()


class NullSetResultSerializer(serializers.Serializer):
    null_set = serializers.CharField()
    verdict = serializers.SerializerMethodField()
    note = serializers.CharField()

    def get_verdict(self, obj: Any) -> Optional[str]:
        return obj.verdict.value if obj.verdict is not None else None


class CovScanSerializer(serializers.Serializer):
    instance = serializers.CharField()
    all_hold = serializers.BooleanField()
    consistent = serializers.BooleanField()
    equivalent_conditions = serializers.BooleanField()
    entries = CovReportSerializer(many=True)
    nv_on_b = VariationReportSerializer()
    nv_on_critical = VariationReportSerializer(allow_null=True)
    null_sets = NullSetResultSerializer(many=True)


class SvcCheckSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    x = RatField()
    y = RatField()
    quotient = ValueWithErrorSerializer()
    bound = ValueWithErrorSerializer()
    ok = serializers.BooleanField()


class FnSpecDescriptorSerializer(serializers.Serializer):

    """
        Public description of a catalog function
    """

    name = serializers.CharField()
    domain = IvSerializer()
    exact = serializers.BooleanField()
    failure_set = serializers.SerializerMethodField()
    certificates = serializers.SerializerMethodField()

    def get_failure_set(self, obj: FnSpec) -> Dict[str, str]:
        return {'kind': obj.failure_set.kind.value, 'region': obj.failure_set.region.name}

    def get_certificates(self, obj: FnSpec) -> List[str]:
        return certificates(obj)


class CovInstanceSerializer(serializers.Serializer):
    name = serializers.CharField()
    description = serializers.CharField()
    domain = IvSerializer()
    failure_set = serializers.SerializerMethodField()

    def get_failure_set(self, obj: Any) -> Dict[str, str]:
        return {'kind': obj.B.kind.value, 'region': obj.B.region.name}


class RunConfigSerializer(serializers.Serializer):

    """
        Validated command-line configuration of one laboratory run
    """

    command = serializers.ChoiceField(choices=COMMANDS)
    fn = serializers.CharField(required=False, allow_null=True)
    instance = serializers.CharField(required=False, allow_null=True)
    tagged_in = serializers.CharField(required=False, allow_null=True)
    domain = serializers.ListField(child=RatField(), min_length=2, max_length=2, required=False, allow_null=True)
    eps = serializers.ListField(child=RatField(allow_decimal=True), min_length=1, required=False)
    tolerance = RatField(allow_decimal=True, required=False, allow_null=True)
    samples = serializers.IntegerField(min_value=1, default=3)
    seed = serializers.IntegerField(required=False, allow_null=True)
    depth_cap = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    out = serializers.CharField(required=False, allow_null=True)
    format = serializers.ChoiceField(choices=['json', 'csv'], default='json')
    expect = serializers.ChoiceField(choices=['auto', 'hold', 'fail'], default='auto')
    mode = serializers.ChoiceField(choices=['nv', 'ncv'], default='nv')
    adversary = serializers.CharField(required=False, allow_null=True)
    gauge = serializers.CharField(required=False, allow_null=True)
    grid = serializers.ListField(child=serializers.CharField(), required=False, allow_null=True)
    n = serializers.ListField(child=serializers.IntegerField(min_value=1, max_value=40), required=False)
    points = serializers.IntegerField(min_value=1, default=50)
    x_index = serializers.IntegerField(min_value=0, required=False, allow_null=True)
    realize = serializers.CharField(required=False, allow_null=True)
    depth = serializers.IntegerField(min_value=0, max_value=20, default=4)
    svc = serializers.BooleanField(default=False)

    def validate_eps(self, value: List[Fraction]) -> List[Fraction]:

        """
            This method validate the ε schedule

            :param value: ε values
            :type value: list

            :return: The ε values, largest first
            :rtype: list
        """

        #Every ε must be positive
        if any(eps <= 0 for eps in value):
            raise serializers.ValidationError("Every ε must be positive")

        return sorted(set(value), reverse=True)

    def validate_grid(self, value: Optional[List[str]]) -> Optional[List[Iv]]:

        """
            This method validate the scan grid, one "lo:hi" cell per item

            :param value: Cells of the grid
            :type value: list

            :return: The cells as intervals
            :rtype: list
        """

        if value is None:
            return None

        cells: List[Iv] = []
        for item in value:
            bounds: List[str] = item.split(':')
            if len(bounds) != 2:
                raise serializers.ValidationError(f"Grid cell '{item}' is not written lo:hi")
            cell = IvSerializer(data={'lo': bounds[0], 'hi': bounds[1]})
            if not cell.is_valid():
                raise serializers.ValidationError(f"Grid cell '{item}': {cell.errors}")
            cells.append(cell.validated_data)
        return cells

    def validate(self, attrs: Dict[str, Any]) -> Dict[str, Any]:

        """
            This method validate the data of the run

            :param attrs: Data of the run
            :type attrs: dict

            :return: Data of the run, with the domain as an interval
            :rtype: dict
        """

        command: str = attrs['command']

        #Randomized runs must be reproducible
        if command in RANDOMIZED and attrs.get('seed') is None:
            raise serializers.ValidationError({'seed': f"A seed is required for the {command} command"})

        if command in FN_COMMANDS and not attrs.get('fn'):
            raise serializers.ValidationError({'fn': f"The {command} command needs a function name"})

        if command in INSTANCE_COMMANDS and not attrs.get('instance'):
            raise serializers.ValidationError({'instance': f"The {command} command needs an instance name"})

        domain: Optional[List[Fraction]] = attrs.get('domain')
        if domain is not None:
            if domain[0] == domain[1]:
                raise serializers.ValidationError({'domain': "The interval has no length"})
            #Reversed endpoints are kept as given; integrate reports the negated integral
            attrs['interval'] = Iv(min(domain), max(domain))

        attrs.setdefault('eps', [Fraction(1, 10), Fraction(1, 100)])
        attrs['n'] = attrs.get('n') or list(range(2, 13))
        return attrs
