# Calculadora de edificios holomorfos en simplectizaciones 4D
__version__ = "1.0.0"
