import numpy as np
import pytest

from errors import (EXIT_INPUT_ERROR, EXIT_NUMERICAL_ERROR, EXIT_PROPERTY_FAILS,
                    ClassificationError, InputError, NumericalError, SingularMatrixError,
                    exit_code_for)


@pytest.mark.parametrize('error, code', [
    (ClassificationError('x'), EXIT_PROPERTY_FAILS),
    (InputError('x'), EXIT_INPUT_ERROR),
    (ValueError('x'), EXIT_INPUT_ERROR),
    (NumericalError('x'), EXIT_NUMERICAL_ERROR),
    (SingularMatrixError('x'), EXIT_NUMERICAL_ERROR),
    (np.linalg.LinAlgError('x'), EXIT_NUMERICAL_ERROR),
])
def test_exit_codes(error, code):
    assert exit_code_for(error) == code


def test_classification_error_keeps_details():
    error = ClassificationError('ν 不可加', {'sum_expansion': 0.0}, {'nu': [[1], [0], [0]]})
    assert error.residuals == {'sum_expansion': 0.0}
    assert error.details['nu'] == [[1], [0], [0]]
    assert ClassificationError('x').details == {}
