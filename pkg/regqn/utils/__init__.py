# regqn/utils/__init__.py
"""
유틸리티 패키지
상수, 곱셈 집계기, 소형 밀집 선형대수
"""
