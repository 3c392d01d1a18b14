# regqn/__init__.py
"""
정규화 제한 메모리 준뉴턴 라이브러리 패키지
압축 표현 기반 L-BFGS / L-SR1 / L-PSB 정규화 방법과 벤치마크 도구
"""

__version__ = "1.0.0"
__author__ = "regqn 개발팀"
__description__ = "정규화 제한 메모리 준뉴턴 방법과 성능 프로파일 벤치마크"
