# Tests para la calculadora de edificios holomorfos
